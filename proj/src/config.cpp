#include "skewlab/config.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "skewlab/raster_io.hpp"
#include "skewlab/sha256.hpp"

namespace skewlab {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

ordered_json RunConfig::to_json() const {
    ordered_json j;
    j["schema"] = "skewlab.config/1";
    j["d"] = d;
    if (c) j["c"] = {{"re", c->real()}, {"im", c->imag()}};
    j["beta"] = {{"re", beta.real()}, {"im", beta.imag()}};
    j["theta"] = theta;
    j["n_radius"] = n_radius;
    j["grid"] = {{"w", grid_w}, {"h", grid_h}};
    j["n_max"] = n_max;
    j["tol"] = tol;
    j["seed"] = seed;
    j["quick"] = quick;
    return j;
}

std::string RunConfig::hash() const { return sha256_hex(to_json().dump()); }

std::string RunConfig::param_key() const {
    ordered_json j;
    j["d"] = d;
    j["beta"] = {{"re", beta.real()}, {"im", beta.imag()}};
    j["theta"] = theta;
    j["seed"] = seed;
    return sha256_hex(j.dump());
}

CertCache::CertCache(const std::string& out_dir) {
    const char* env = std::getenv("SKEWLAB_CACHE");
    dir_ = env && *env ? env : (fs::path(out_dir) / "cache").string();
    fs::create_directories(dir_);
}

std::string CertCache::path_for(const std::string& key, const std::string& kind) const {
    return (fs::path(dir_) / (key.substr(0, 24) + "." + kind + ".json")).string();
}

void CertCache::store(const std::string& key, const std::string& kind,
                      const ordered_json& doc) const {
    ordered_json wrapped = doc;
    wrapped["content_hash"] = sha256_hex(doc.dump());
    write_text(path_for(key, kind), wrapped.dump(2) + "\n");
}

std::optional<ordered_json> CertCache::load(const std::string& key,
                                            const std::string& kind) const {
    std::string p = path_for(key, kind);
    if (!fs::exists(p)) return std::nullopt;
    try {
        ordered_json j = ordered_json::parse(read_file(p));
        if (!j.contains("content_hash")) return std::nullopt;
        std::string want = j["content_hash"];
        ordered_json body = j;
        body.erase("content_hash");
        if (sha256_hex(body.dump()) != want) return std::nullopt;  // corrupted
        return body;
    } catch (...) {
        return std::nullopt;
    }
}

ordered_json params_to_json(const FamilyParams& p, const AssumptionReport& rep) {
    ordered_json j;
    j["schema"] = "skewlab.params/1";
    j["d"] = p.d;
    j["c"] = {{"re", fmt_double(p.c.real())}, {"im", fmt_double(p.c.imag())}};
    j["beta"] = {{"re", fmt_double(p.beta.real())}, {"im", fmt_double(p.beta.imag())}};
    j["theta"] = fmt_double(p.theta);
    j["m"] = {{"re", fmt_double(p.m.real())}, {"im", fmt_double(p.m.imag())}};
    j["multiplier"] = {{"re", fmt_double(p.multiplier.real())},
                       {"im", fmt_double(p.multiplier.imag())}};
    j["residual_fixed"] = p.residual_fixed;
    j["residual_crit"] = p.residual_crit;
    ordered_json ja1;
    ja1["periodic_points"] = rep.a1.periodic_points;
    ja1["min_multiplier"] = rep.a1.min_multiplier;
    ja1["boundary_components"] = rep.a1.boundary_components;
    ja1["verdict"] = verdict_name(rep.a1.verdict);
    ordered_json ja2;
    ja2["residual"] = rep.a2.residual;
    ja2["multiplier_abs"] = rep.a2.multiplier_abs;
    ja2["membership_px"] = rep.a2.membership_px;
    ja2["verdict"] = verdict_name(rep.a2.verdict);
    ordered_json ja3;
    ja3["z1"] = {{"re", fmt_double(rep.a3.z1.real())}, {"im", fmt_double(rep.a3.z1.imag())}};
    ja3["escaped"] = rep.a3.escaped;
    ja3["escape_index"] = rep.a3.escape_index;
    ja3["threshold_a0"] = rep.a3.threshold_a0;
    ja3["scan_monotone"] = rep.a3.scan_monotone;
    ja3["verdict"] = verdict_name(rep.a3.verdict);
    j["assumptions"] = {{"A1", ja1}, {"A2", ja2}, {"A3", ja3}};
    j["caveats"] = rep.caveats;
    return j;
}

FamilyParams params_from_json(const ordered_json& j) {
    FamilyParams p;
    p.d = j["d"];
    auto cx = [](const ordered_json& v) {
        return cplx(std::stod(v["re"].get<std::string>()),
                    std::stod(v["im"].get<std::string>()));
    };
    p.c = cx(j["c"]);
    p.beta = cx(j["beta"]);
    p.theta = std::stod(j["theta"].get<std::string>());
    p.m = cx(j["m"]);
    p.multiplier = cx(j["multiplier"]);
    p.residual_fixed = j["residual_fixed"];
    p.residual_crit = j["residual_crit"];
    return p;
}

}  // namespace skewlab
