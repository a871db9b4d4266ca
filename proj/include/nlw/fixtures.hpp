#pragma once

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>

#include "nlw/dimension.hpp"
#include "nlw/groundstate.hpp"

namespace nlw {

/// Reference constants (the quadrature values of the ground-state norms),
/// computed once by the library's own quadrature and stored in a versioned,
/// human-readable key-value file. Nothing in here is copied from literature;
/// a stale or edited file is detectable through the settings hash.
class FixtureSet {
public:
    static constexpr const char* kVersion = "nlwlab-fixtures-v1";

    static FixtureSet compute(const groundstate::QuadratureSettings& qs = {}) {
        FixtureSet fx;
        fx.qhash_ = qs.hash();
        for (int n = 3; n <= 5; ++n) {
            const Dimension dim(n);
            const NormBundle nb = groundstate::w_base_norms(dim, qs);
            fx.values_[{n, "grad_sq"}] = nb.grad_sq;
            fx.values_[{n, "lp_crit"}] = nb.lp_crit;
            fx.values_[{n, "energy"}] = 0.5 * nb.grad_sq - (n - 2) / (2.0 * n) * nb.lp_crit;
        }
        return fx;
    }

    double get(Dimension dim, const std::string& name) const {
        auto it = values_.find({dim.n(), name});
        if (it == values_.end())
            throw std::out_of_range("FixtureSet: missing constant " + name + " for N=" +
                                    std::to_string(dim.n()));
        return it->second;
    }

    double w_grad_sq(Dimension dim) const { return get(dim, "grad_sq"); }
    double w_energy(Dimension dim) const { return get(dim, "energy"); }
    std::uint64_t settings_hash() const { return qhash_; }

    void save(const std::string& path) const {
        std::ofstream out(path);
        if (!out) throw std::runtime_error("FixtureSet: cannot write " + path);
        out << "# " << kVersion << "\n";
        char buf[128];
        for (const auto& [key, value] : values_) {
            std::snprintf(buf, sizeof(buf), "dim=%d name=%s value=%.17g qhash=%016llx\n",
                          key.first, key.second.c_str(), value,
                          static_cast<unsigned long long>(qhash_));
            out << buf;
        }
    }

    static FixtureSet load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("FixtureSet: cannot read " + path);
        std::string header;
        std::getline(in, header);
        if (header != std::string("# ") + kVersion)
            throw std::runtime_error("FixtureSet: unrecognized fixtures version in " + path);
        FixtureSet fx;
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            int dim = 0;
            char name[64] = {0};
            double value = 0.0;
            unsigned long long qh = 0;
            if (std::sscanf(line.c_str(), "dim=%d name=%63s value=%lg qhash=%llx", &dim, name,
                            &value, &qh) != 4)
                throw std::runtime_error("FixtureSet: malformed record: " + line);
            fx.values_[{dim, name}] = value;
            fx.qhash_ = qh;
        }
        if (fx.values_.empty()) throw std::runtime_error("FixtureSet: no records in " + path);
        return fx;
    }

    /// Loads the fixtures file if present, computing and writing it otherwise.
    /// The NLW_FIXTURES environment variable overrides the path.
    static FixtureSet load_or_compute(std::string path) {
        if (const char* env = std::getenv("NLW_FIXTURES")) path = env;
        if (std::filesystem::exists(path)) return load(path);
        FixtureSet fx = compute();
        fx.save(path);
        return fx;
    }

private:
    std::map<std::pair<int, std::string>, double> values_;
    std::uint64_t qhash_ = 0;
};

}  // namespace nlw
