#include "snnprob/synapses.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace snnprob {

std::pair<SortedSynapseList, SortedSynapseList>
build_sorted_lists(const std::vector<double>& dense_row, NeuronId first_target) {
    struct Entry {
        double w;
        NeuronId target;
    };
    std::vector<Entry> exc, inh;
    for (std::size_t col = 0; col < dense_row.size(); ++col) {
        double w = dense_row[col];
        if (!std::isfinite(w)) {
            throw std::invalid_argument("build_sorted_lists: non-finite weight at column " +
                                        std::to_string(col));
        }
        if (w == 0.0) continue;
        NeuronId target = first_target + static_cast<NeuronId>(col);
        if (w > 0.0) {
            exc.push_back({w, target});
        } else {
            inh.push_back({w, target});
        }
    }

    auto by_descending_magnitude = [](const Entry& a, const Entry& b) {
        double ma = std::fabs(a.w), mb = std::fabs(b.w);
        if (ma != mb) return ma > mb;
        return a.target < b.target;
    };
    std::sort(exc.begin(), exc.end(), by_descending_magnitude);
    std::sort(inh.begin(), inh.end(), by_descending_magnitude);

    auto pack = [](const std::vector<Entry>& entries) {
        SortedSynapseList list;
        list.weights.reserve(entries.size());
        list.targets.reserve(entries.size());
        for (const Entry& e : entries) {
            list.weights.push_back(e.w);
            list.targets.push_back(e.target);
        }
        list.w_extreme = entries.empty() ? 0.0 : entries.front().w;
        list.pwl = fit_pwl(list);
        return list;
    };
    return {pack(exc), pack(inh)};
}

PwlProfile fit_pwl(const SortedSynapseList& list, int segments) {
    PwlProfile profile;
    const std::uint32_t n = list.n_max();
    if (n == 0) return profile;

    auto sample = [&](std::uint32_t pos) -> double {
        // Slot p approximates the (p+1)-th magnitude; past the end the curve
        // closes at zero, which keeps linearly decaying lists exact.
        if (pos >= n) return 0.0;
        return std::fabs(list.weights[pos]);
    };

    std::uint32_t prev = 0;
    for (int k = 0; k <= segments; ++k) {
        auto pos = static_cast<std::uint32_t>(
            std::llround(static_cast<double>(k) * n / segments));
        if (pos > n) pos = n;
        if (k > 0 && pos <= prev) continue;
        profile.points.push_back({pos, sample(pos)});
        prev = pos;
    }

    // Exhaustive monotonicity check over every integer slot: the curve must
    // never exceed |w_extreme| and never increase.
    double prev_mag = std::fabs(list.w_extreme);
    for (std::uint32_t p = 0; p <= n; ++p) {
        double mag = pwl_eval(profile, static_cast<double>(p));
        if (mag > prev_mag + 1e-12 * std::fabs(list.w_extreme)) {
            throw std::logic_error("fit_pwl: non-monotone profile at slot " + std::to_string(p));
        }
        prev_mag = mag;
    }
    return profile;
}

double pwl_eval(const PwlProfile& profile, double position) {
    if (profile.empty()) return 0.0;
    const auto& pts = profile.points;
    if (position <= pts.front().pos) return pts.front().mag;
    if (position >= pts.back().pos) return pts.back().mag;
    for (std::size_t i = 1; i < pts.size(); ++i) {
        if (position <= pts[i].pos) {
            double span = static_cast<double>(pts[i].pos) - pts[i - 1].pos;
            double t = (position - pts[i - 1].pos) / span;
            return pts[i - 1].mag + t * (pts[i].mag - pts[i - 1].mag);
        }
    }
    return pts.back().mag;
}

std::uint32_t pwl_invert(const PwlProfile& profile, double r, std::uint32_t n_max) {
    if (profile.empty() || n_max == 0) return 0;
    // Count the integer slots whose approximated magnitude clears r. Working
    // on slots directly (instead of flooring the segment crossing) keeps ties
    // at sampled weights on the >= side; the tolerance absorbs interpolation
    // round-off, which matters when r is exactly a stored weight.
    const double tolerance = 1e-9 * profile.points.front().mag;
    auto clears = [&](std::uint32_t slot) {
        return pwl_eval(profile, static_cast<double>(slot)) >= r - tolerance;
    };
    if (!clears(0)) return 0;
    std::uint32_t lo = 0, hi = n_max; // curve is non-increasing over slots
    while (lo < hi) {
        std::uint32_t mid = lo + (hi - lo + 1u) / 2u;
        if (clears(mid)) {
            lo = mid;
        } else {
            hi = mid - 1u;
        }
    }
    return std::min(lo + 1u, n_max);
}

double expected_termpt(const SortedSynapseList& list) {
    if (list.empty()) return 0.0;
    double sum = 0.0;
    for (double w : list.weights) sum += std::fabs(w);
    return sum / std::fabs(list.w_extreme);
}

} // namespace snnprob
