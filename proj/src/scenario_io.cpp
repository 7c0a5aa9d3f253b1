#include "sqglab/scenario_io.hpp"

#include <cmath>
#include <cstdint>
#include <iomanip>
#include <set>
#include <sstream>

#include <json.hpp>

namespace sqg {

namespace {

using nlohmann::json;

[[noreturn]] void bad_field(const std::string& field, const std::string& why) {
    throw std::invalid_argument("config: field '" + field + "' " + why);
}

void reject_unknown(const json& obj, const std::set<std::string>& allowed,
                    const std::string& where) {
    for (const auto& [key, val] : obj.items()) {
        (void)val;
        if (!allowed.count(key)) bad_field(where.empty() ? key : where + "." + key,
                                           "is not a recognized key");
    }
}

double require_number(const json& obj, const std::string& field) {
    if (!obj.contains(field)) bad_field(field, "is required");
    if (!obj.at(field).is_number()) bad_field(field, "must be a number");
    return obj.at(field).get<double>();
}

double optional_number(const json& obj, const std::string& field, double fallback) {
    if (!obj.contains(field)) return fallback;
    if (!obj.at(field).is_number()) bad_field(field, "must be a number");
    return obj.at(field).get<double>();
}

}  // namespace

Scenario parse_scenario_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("config: invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw std::invalid_argument("config: expected a JSON object");

    reject_unknown(j, {"grid_n", "alpha1", "alpha2", "beta", "r_cap", "theta0", "t_end",
                       "cfl_factor", "dt_max", "record_dt", "snapshot_dt", "out_dir",
                       "dealias", "transport", "grad_ceiling", "moc_shift_jmax"},
                   "");

    Scenario sc;
    const double grid_n = require_number(j, "grid_n");
    if (grid_n < 32 || grid_n != std::floor(grid_n) ||
        (static_cast<int>(grid_n) & (static_cast<int>(grid_n) - 1)) != 0)
        bad_field("grid_n", "must be a power of two >= 32");
    sc.grid_n = static_cast<int>(grid_n);

    sc.alpha1 = require_number(j, "alpha1");
    if (sc.alpha1 < 0.0) bad_field("alpha1", "must be >= 0");
    sc.alpha2 = require_number(j, "alpha2");
    if (sc.alpha2 < 0.0) bad_field("alpha2", "must be >= 0");
    sc.beta = require_number(j, "beta");
    if (!(sc.beta > 0.0)) bad_field("beta", "must be > 0");
    sc.r_cap = optional_number(j, "r_cap", ModulusOfContinuity::kDefaultRCap);
    if (!(sc.r_cap > 0.0 && sc.r_cap < 1.0)) bad_field("r_cap", "must lie in (0, 1)");

    sc.t_end = require_number(j, "t_end");
    if (sc.t_end < 0.0) bad_field("t_end", "must be >= 0");
    sc.cfl_factor = optional_number(j, "cfl_factor", 0.5);
    if (!(sc.cfl_factor > 0.0 && sc.cfl_factor <= 1.0))
        bad_field("cfl_factor", "must lie in (0, 1]");
    sc.dt_max = optional_number(j, "dt_max", 0.05);
    if (!(sc.dt_max > 0.0)) bad_field("dt_max", "must be > 0");
    sc.record_dt = require_number(j, "record_dt");
    if (!(sc.record_dt > 0.0)) bad_field("record_dt", "must be > 0");
    sc.snapshot_dt = optional_number(j, "snapshot_dt", 0.0);
    if (sc.snapshot_dt < 0.0) bad_field("snapshot_dt", "must be >= 0");
    sc.grad_ceiling = optional_number(j, "grad_ceiling", 1e6);
    if (!(sc.grad_ceiling > 0.0)) bad_field("grad_ceiling", "must be > 0");
    sc.moc_shift_jmax =
        static_cast<int>(optional_number(j, "moc_shift_jmax", -1.0));

    if (j.contains("dealias")) {
        if (!j.at("dealias").is_boolean()) bad_field("dealias", "must be a boolean");
        sc.dealias_enabled = j.at("dealias").get<bool>();
    }
    if (j.contains("transport")) {
        if (!j.at("transport").is_boolean()) bad_field("transport", "must be a boolean");
        sc.transport_enabled = j.at("transport").get<bool>();
    }
    if (j.contains("out_dir")) {
        if (!j.at("out_dir").is_string()) bad_field("out_dir", "must be a string");
        sc.out_dir = j.at("out_dir").get<std::string>();
    }

    if (!j.contains("theta0")) bad_field("theta0", "is required");
    const json& t0 = j.at("theta0");
    if (!t0.is_object()) bad_field("theta0", "must be an object");
    reject_unknown(t0, {"kind", "params", "seed"}, "theta0");
    if (!t0.contains("kind") || !t0.at("kind").is_string())
        bad_field("theta0.kind", "must be a string");
    sc.theta0.kind = t0.at("kind").get<std::string>();
    if (t0.contains("seed")) {
        if (!t0.at("seed").is_number_unsigned() && !t0.at("seed").is_number_integer())
            bad_field("theta0.seed", "must be an integer");
        sc.theta0.seed = t0.at("seed").get<std::uint64_t>();
    }

    const json params = t0.value("params", json::object());
    if (!params.is_object()) bad_field("theta0.params", "must be an object");
    const std::string& kind = sc.theta0.kind;
    if (kind == "single_mode") {
        reject_unknown(params, {"kx", "ky", "amplitude", "phase"}, "theta0.params");
        sc.theta0.kx = static_cast<int>(optional_number(params, "kx", 1));
        sc.theta0.ky = static_cast<int>(optional_number(params, "ky", 0));
        sc.theta0.amplitude = optional_number(params, "amplitude", 1.0);
        sc.theta0.phase = optional_number(params, "phase", 0.0);
    } else if (kind == "mode_product") {
        reject_unknown(params, {"kx", "ky", "amplitude"}, "theta0.params");
        sc.theta0.kx = static_cast<int>(optional_number(params, "kx", 1));
        sc.theta0.ky = static_cast<int>(optional_number(params, "ky", 1));
        sc.theta0.amplitude = optional_number(params, "amplitude", 1.0);
    } else if (kind == "benchmark") {
        reject_unknown(params, {"amplitude"}, "theta0.params");
        sc.theta0.amplitude = optional_number(params, "amplitude", 1.0);
    } else if (kind == "random_band") {
        reject_unknown(params, {"kmin", "kmax", "amplitude"}, "theta0.params");
        sc.theta0.kmin = static_cast<int>(optional_number(params, "kmin", 1));
        sc.theta0.kmax = static_cast<int>(optional_number(params, "kmax", 8));
        sc.theta0.amplitude = optional_number(params, "amplitude", 1.0);
        if (sc.theta0.kmin < 1 || sc.theta0.kmax < sc.theta0.kmin ||
            sc.theta0.kmax > sc.grid_n / 2)
            bad_field("theta0.params", "needs 1 <= kmin <= kmax <= grid_n/2");
    } else if (kind == "steep_front") {
        reject_unknown(params, {"width", "bump_width", "amplitude"}, "theta0.params");
        sc.theta0.width = optional_number(params, "width", 0.2);
        sc.theta0.bump_width = optional_number(params, "bump_width", 1.0);
        sc.theta0.amplitude = optional_number(params, "amplitude", 1.0);
        if (!(sc.theta0.width > 0.0)) bad_field("theta0.params.width", "must be > 0");
        if (!(sc.theta0.bump_width > 0.0))
            bad_field("theta0.params.bump_width", "must be > 0");
    } else {
        bad_field("theta0.kind", "must be one of single_mode, mode_product, benchmark, "
                                 "random_band, steep_front");
    }
    return sc;
}

std::string scenario_to_json(const Scenario& sc) {
    json params;
    if (sc.theta0.kind == "single_mode")
        params = {{"kx", sc.theta0.kx},
                  {"ky", sc.theta0.ky},
                  {"amplitude", sc.theta0.amplitude},
                  {"phase", sc.theta0.phase}};
    else if (sc.theta0.kind == "mode_product")
        params = {{"kx", sc.theta0.kx},
                  {"ky", sc.theta0.ky},
                  {"amplitude", sc.theta0.amplitude}};
    else if (sc.theta0.kind == "benchmark")
        params = {{"amplitude", sc.theta0.amplitude}};
    else if (sc.theta0.kind == "random_band")
        params = {{"kmin", sc.theta0.kmin},
                  {"kmax", sc.theta0.kmax},
                  {"amplitude", sc.theta0.amplitude}};
    else
        params = {{"width", sc.theta0.width},
                  {"bump_width", sc.theta0.bump_width},
                  {"amplitude", sc.theta0.amplitude}};

    json j{{"grid_n", sc.grid_n},
           {"alpha1", sc.alpha1},
           {"alpha2", sc.alpha2},
           {"beta", sc.beta},
           {"r_cap", sc.r_cap},
           {"theta0", {{"kind", sc.theta0.kind}, {"params", params}, {"seed", sc.theta0.seed}}},
           {"t_end", sc.t_end},
           {"cfl_factor", sc.cfl_factor},
           {"dt_max", sc.dt_max},
           {"record_dt", sc.record_dt},
           {"snapshot_dt", sc.snapshot_dt},
           {"dealias", sc.dealias_enabled},
           {"transport", sc.transport_enabled},
           {"grad_ceiling", sc.grad_ceiling},
           {"moc_shift_jmax", sc.moc_shift_jmax},
           {"out_dir", sc.out_dir}};
    return j.dump(2);
}

// ----------------------------------------------------------------------
// Git-style blob hash
// ----------------------------------------------------------------------

namespace {

struct Sha1 {
    std::uint32_t h[5] = {0x67452301u, 0xEFCDAB89u, 0x98BADCFEu, 0x10325476u, 0xC3D2E1F0u};

    static std::uint32_t rol(std::uint32_t v, int s) { return (v << s) | (v >> (32 - s)); }

    void block(const unsigned char* p) {
        std::uint32_t w[80];
        for (int i = 0; i < 16; ++i)
            w[i] = (std::uint32_t(p[4 * i]) << 24) | (std::uint32_t(p[4 * i + 1]) << 16) |
                   (std::uint32_t(p[4 * i + 2]) << 8) | std::uint32_t(p[4 * i + 3]);
        for (int i = 16; i < 80; ++i) w[i] = rol(w[i - 3] ^ w[i - 8] ^ w[i - 14] ^ w[i - 16], 1);
        std::uint32_t a = h[0], b = h[1], c = h[2], d = h[3], e = h[4];
        for (int i = 0; i < 80; ++i) {
            std::uint32_t f, k;
            if (i < 20) {
                f = (b & c) | (~b & d);
                k = 0x5A827999u;
            } else if (i < 40) {
                f = b ^ c ^ d;
                k = 0x6ED9EBA1u;
            } else if (i < 60) {
                f = (b & c) | (b & d) | (c & d);
                k = 0x8F1BBCDCu;
            } else {
                f = b ^ c ^ d;
                k = 0xCA62C1D6u;
            }
            const std::uint32_t t = rol(a, 5) + f + e + k + w[i];
            e = d;
            d = c;
            c = rol(b, 30);
            b = a;
            a = t;
        }
        h[0] += a;
        h[1] += b;
        h[2] += c;
        h[3] += d;
        h[4] += e;
    }

    std::string digest(const std::string& msg) {
        std::string padded = msg;
        const std::uint64_t bits = std::uint64_t(msg.size()) * 8;
        padded.push_back('\x80');
        while (padded.size() % 64 != 56) padded.push_back('\0');
        for (int i = 7; i >= 0; --i)
            padded.push_back(static_cast<char>((bits >> (8 * i)) & 0xFF));
        for (std::size_t off = 0; off < padded.size(); off += 64)
            block(reinterpret_cast<const unsigned char*>(padded.data()) + off);
        std::ostringstream out;
        out << std::hex << std::setfill('0');
        for (const std::uint32_t v : h) out << std::setw(8) << v;
        return out.str();
    }
};

}  // namespace

std::string git_blob_sha1(const std::string& bytes) {
    Sha1 sha;
    return sha.digest("blob " + std::to_string(bytes.size()) + '\0' + bytes);
}

}  // namespace sqg
