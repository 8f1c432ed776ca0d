// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "rkbeam/common.hpp"
#include "rkbeam/specialfn.hpp"
#include "rkbeam/harmonics.hpp"
#include "rkbeam/directivity.hpp"
#include "rkbeam/kernelfield.hpp"
#include "rkbeam/beamformer.hpp"
