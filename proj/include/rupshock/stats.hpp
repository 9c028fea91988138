#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "rupshock/errors.hpp"

namespace rupshock {

// Monte Carlo vs analytic comparison, one cell per outcome. The verdict is a
// plain max-|z| gate: estimate and reference agree when every standardized
// deviation stays inside the bound.
struct McReport {
    std::vector<std::string> labels;
    std::vector<double> estimate;   // empirical frequency per outcome
    std::vector<double> std_error;  // sqrt(p(1-p)/n) at the estimate
    std::vector<double> analytic;   // reference value per outcome
    std::vector<double> z_score;
    std::size_t replicates = 0;
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;  // root stream id; replicate i used stream + i
    double z_bound = 3.0;
    double max_abs_z = 0.0;
    bool pass = true;
};

inline McReport make_mc_report(std::vector<std::string> labels,
                               const std::vector<std::uint64_t>& counts,
                               std::size_t replicates, std::vector<double> analytic,
                               double z_bound, std::uint64_t seed, std::uint64_t stream) {
    if (labels.size() != counts.size() || labels.size() != analytic.size())
        raise(errc::bad_config, "mc report needs matching labels, counts and references");
    if (replicates == 0) raise(errc::bad_config, "mc report needs replicates > 0");
    McReport rep;
    rep.labels = std::move(labels);
    rep.analytic = std::move(analytic);
    rep.replicates = replicates;
    rep.seed = seed;
    rep.stream = stream;
    rep.z_bound = z_bound;
    const double n = static_cast<double>(replicates);
    for (std::size_t i = 0; i < counts.size(); ++i) {
        const double p_hat = static_cast<double>(counts[i]) / n;
        const double se = std::sqrt(p_hat * (1.0 - p_hat) / n);
        double z = 0.0;
        if (se > 0.0)
            z = (p_hat - rep.analytic[i]) / se;
        else if (p_hat != rep.analytic[i])
            z = std::numeric_limits<double>::infinity();
        rep.estimate.push_back(p_hat);
        rep.std_error.push_back(se);
        rep.z_score.push_back(z);
        rep.max_abs_z = std::max(rep.max_abs_z, std::abs(z));
    }
    rep.pass = rep.max_abs_z < rep.z_bound;
    return rep;
}

// Kolmogorov-Smirnov distance between a sample and a reference CDF.
// `sample` is sorted in place.
template <typename Cdf>
double ks_distance(std::vector<double>& sample, Cdf&& cdf) {
    if (sample.empty()) raise(errc::bad_config, "ks distance of an empty sample");
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double f = cdf(sample[i]);
        d = std::max(d, std::abs((static_cast<double>(i) + 1.0) / n - f));
        d = std::max(d, std::abs(static_cast<double>(i) / n - f));
    }
    return d;
}

}  // namespace rupshock
