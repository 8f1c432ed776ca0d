// SPDX-License-Identifier: Apache-2.0
#include "rkbeam/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace rkbeam::sim
{

namespace
{

std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

double parse_double(const std::string& key, const std::string& v)
{
    if (v == "inf" || v == "+inf")
        return std::numeric_limits<double>::infinity();
    if (v == "-inf")
        return -std::numeric_limits<double>::infinity();
    double out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size())
        throw ConfigError(key + ": expected a number, got '" + v + "'");
    return out;
}

long long parse_int(const std::string& key, const std::string& v)
{
    long long out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size())
        throw ConfigError(key + ": expected an integer, got '" + v + "'");
    return out;
}

int parse_count(const std::string& key, const std::string& v, int min)
{
    const long long n = parse_int(key, v);
    if (n < min || n > 1'000'000)
        throw ConfigError(key + ": value " + v + " is out of range");
    return static_cast<int>(n);
}

bool parse_bool(const std::string& key, const std::string& v)
{
    if (v == "true" || v == "1")
        return true;
    if (v == "false" || v == "0")
        return false;
    throw ConfigError(key + ": expected true or false, got '" + v + "'");
}

std::vector<double> parse_list(const std::string& key, const std::string& v)
{
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ','))
        out.push_back(parse_double(key, trim(item)));
    if (out.empty())
        throw ConfigError(key + ": empty list");
    return out;
}

// mic = x y <directivity record>; the point has as many coordinates as the record's dimension
Microphone<double> parse_mic(const std::string& v)
{
    std::istringstream is(v);
    std::vector<std::string> tok;
    for (std::string t; is >> t;)
        tok.push_back(t);
    if (tok.size() < 3)
        throw ConfigError("mic: expected 'x y d max_degree re im ...'");
    // the dimension sits right after the coordinates; try d = 2 then d = 3
    for (int d : {2, 3}) {
        if (tok.size() <= static_cast<std::size_t>(d) || tok[static_cast<std::size_t>(d)] != std::to_string(d))
            continue;
        Point<double> r(d);
        for (int c = 0; c < d; ++c)
            r(c) = parse_double("mic", tok[static_cast<std::size_t>(c)]);
        std::string record;
        for (std::size_t i = static_cast<std::size_t>(d); i < tok.size(); ++i)
            record += tok[i] + ' ';
        try {
            return {r, directivity_from_record<double>(record)};
        } catch (const std::exception& e) {
            throw ConfigError(std::string("mic: ") + e.what());
        }
    }
    throw ConfigError("mic: could not locate the directivity dimension after the coordinates");
}

} // namespace

void set_config_value(ScenarioConfig& cfg, const std::string& key, const std::string& value)
{
    if (key == "seed") {
        if (value.empty() || value[0] == '-')
            throw ConfigError("seed: expected a non-negative integer");
        std::uint64_t s = 0;
        const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), s);
        if (ec != std::errc() || ptr != value.data() + value.size())
            throw ConfigError("seed: expected a non-negative integer, got '" + value + "'");
        cfg.seed = s;
    } else if (key == "dim") {
        cfg.dim = parse_count(key, value, 2);
        if (cfg.dim != 2)
            throw ConfigError("dim: scenarios support d = 2 only");
    } else if (key == "num_mics") {
        cfg.num_mics = parse_count(key, value, 1);
    } else if (key == "side") {
        cfg.side = parse_double(key, value);
    } else if (key == "max_degree") {
        cfg.max_degree = parse_count(key, value, 0);
    } else if (key == "snr_db") {
        cfg.snr_db = parse_double(key, value);
        if (std::isnan(cfg.snr_db) || cfg.snr_db == -std::numeric_limits<double>::infinity())
            throw ConfigError("snr_db: expected a finite value or inf");
    } else if (key == "lambda") {
        cfg.lambda = parse_double(key, value);
        if (!(cfg.lambda >= 0) || !std::isfinite(cfg.lambda))
            throw ConfigError("lambda: must be finite and non-negative");
    } else if (key == "lambda_relative") {
        cfg.lambda_relative = parse_bool(key, value);
    } else if (key == "c_sound") {
        cfg.c_sound = parse_double(key, value);
    } else if (key == "frequencies") {
        cfg.frequencies = parse_list(key, value);
    } else if (key == "eval_side") {
        cfg.eval_side = parse_double(key, value);
    } else if (key == "eval_grid_n") {
        cfg.eval_grid_n = parse_count(key, value, 1);
    } else if (key == "look_angle") {
        cfg.look_angle = parse_double(key, value);
    } else if (key == "pattern_points") {
        cfg.pattern_points = parse_count(key, value, 1);
    } else if (key == "di_quad_points") {
        cfg.di_quad_points = parse_count(key, value, 360);
    } else if (key == "pattern_freq") {
        cfg.pattern_freq = parse_double(key, value);
    } else {
        throw ConfigError("unknown key '" + key + "'");
    }
}

ScenarioConfig parse_config(std::string_view text, const std::string& source)
{
    ScenarioConfig cfg;
    std::vector<Microphone<double>> mics;
    std::istringstream is{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const std::string body = trim(line.substr(0, line.find('#')));
        if (body.empty())
            continue;
        const auto eq = body.find('=');
        const std::string where = source + ":" + std::to_string(lineno) + ": ";
        if (eq == std::string::npos)
            throw ConfigError(where + "expected 'key = value'");
        const std::string key = trim(std::string_view(body).substr(0, eq));
        const std::string value = trim(std::string_view(body).substr(eq + 1));
        try {
            if (key == "mic")
                mics.push_back(parse_mic(value));
            else
                set_config_value(cfg, key, value);
        } catch (const ConfigError& e) {
            throw ConfigError(where + e.what());
        }
    }
    if (!mics.empty()) {
        try {
            cfg.explicit_array = MicArray<double>(cfg.dim, std::move(mics));
        } catch (const std::exception& e) {
            throw ConfigError(source + ": " + e.what());
        }
        cfg.num_mics = static_cast<int>(cfg.explicit_array->size());
        cfg.max_degree = cfg.explicit_array->max_degree();
    }
    return cfg;
}

ScenarioConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path);
}

std::string format_config(const ScenarioConfig& cfg)
{
    std::ostringstream os;
    os << "seed = " << cfg.seed << "\n";
    os << "dim = " << cfg.dim << "\n";
    os << "num_mics = " << cfg.num_mics << "\n";
    os << "side = " << format_double(cfg.side) << "\n";
    os << "max_degree = " << cfg.max_degree << "\n";
    os << "snr_db = " << format_double(cfg.snr_db) << "\n";
    os << "lambda = " << format_double(cfg.lambda) << "\n";
    os << "lambda_relative = " << (cfg.lambda_relative ? "true" : "false") << "\n";
    os << "c_sound = " << format_double(cfg.c_sound) << "\n";
    os << "frequencies = ";
    for (std::size_t i = 0; i < cfg.frequencies.size(); ++i)
        os << (i ? ", " : "") << format_double(cfg.frequencies[i]);
    os << "\n";
    os << "eval_side = " << format_double(cfg.eval_side) << "\n";
    os << "eval_grid_n = " << cfg.eval_grid_n << "\n";
    os << "look_angle = " << format_double(cfg.look_angle) << "\n";
    os << "pattern_points = " << cfg.pattern_points << "\n";
    os << "di_quad_points = " << cfg.di_quad_points << "\n";
    os << "pattern_freq = " << format_double(cfg.pattern_freq) << "\n";
    if (cfg.explicit_array)
        for (const auto& m : *cfg.explicit_array) {
            os << "mic =";
            for (Eigen::Index c = 0; c < m.position.size(); ++c)
                os << ' ' << format_double(m.position(c));
            os << ' ' << to_record(m.directivity) << "\n";
        }
    return os.str();
}

} // namespace rkbeam::sim
