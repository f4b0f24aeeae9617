#pragma once

#include <optional>
#include <string>

#include "skewlab/family.hpp"
#include "skewlab/types.hpp"

#include "json.hpp"

namespace skewlab {

// One run configuration. threads and out_dir are execution parameters, not
// part of the mathematical identity of an output: they are excluded from the
// serialized form and from the config hash so that outputs are byte-identical
// across thread counts and directories.
struct RunConfig {
    int d = 3;
    std::optional<cplx> c;       // absent: use the certified finder result
    cplx beta{1.0, 0.0};
    double theta = kGoldenTheta;
    double n_radius = 0.05;      // N radius in the linearizing coordinate
    int grid_w = 512, grid_h = 512;
    int n_max = 4096;
    double tol = 1e-9;
    uint64_t seed = 1;
    bool quick = false;

    // execution-only (not hashed, not serialized)
    int threads = 1;
    std::string out_dir = "out";
    bool unchecked = false;

    nlohmann::ordered_json to_json() const;
    std::string hash() const;       // sha256 of the canonical serialization
    std::string param_key() const;  // hash of (d, beta, theta, seed) only:
                                    // identifies the parameter certificate
};

// Content-addressed JSON certificate cache. Directory resolution order:
// SKEWLAB_CACHE env var, then <out_dir>/cache.
class CertCache {
public:
    explicit CertCache(const std::string& out_dir);
    const std::string& dir() const { return dir_; }

    std::string path_for(const std::string& key, const std::string& kind) const;
    void store(const std::string& key, const std::string& kind,
               const nlohmann::ordered_json& doc) const;
    // nullopt when missing or corrupted (hash mismatch / parse failure)
    std::optional<nlohmann::ordered_json> load(const std::string& key,
                                               const std::string& kind) const;

private:
    std::string dir_;
};

nlohmann::ordered_json params_to_json(const FamilyParams& p,
                                      const AssumptionReport& rep);
FamilyParams params_from_json(const nlohmann::ordered_json& j);

}  // namespace skewlab
