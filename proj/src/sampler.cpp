#include "fiberwalk/sampler.hpp"

#include <algorithm>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <unordered_map>

namespace fiberwalk {

std::uint64_t Rng::derive_seed(std::uint64_t seed, std::uint64_t idx) {
    std::uint64_t z = seed + (idx + 1) * 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

namespace {

// Cached log n!; counts at desk scale stay far below the table limit.
double log_factorial(Count n) {
    static std::vector<double> table{0.0, 0.0};
    while (static_cast<Count>(table.size()) <= n)
        table.push_back(table.back() + std::log(static_cast<double>(table.size())));
    return table[static_cast<size_t>(n)];
}

}  // namespace

double TargetDistribution::log_weight(const Table& t) const {
    switch (kind) {
        case Kind::Uniform:
            return 0.0;
        case Kind::Hypergeometric: {
            double lw = 0.0;
            for (Count c : t.counts) lw -= log_factorial(c);
            return lw;
        }
        case Kind::Custom:
            return custom_log_weight(t);
    }
    return 0.0;
}

double TargetDistribution::log_ratio(const Table& before, const Table& after,
                                     const Move& move) const {
    switch (kind) {
        case Kind::Uniform:
            return 0.0;
        case Kind::Hypergeometric: {
            double lr = 0.0;
            for (const auto& [h, v] : move.cells) {
                (void)v;
                lr += log_factorial(before.counts[h]) - log_factorial(after.counts[h]);
            }
            return lr;
        }
        case Kind::Custom:
            return custom_log_weight(after) - custom_log_weight(before);
    }
    return 0.0;
}

Table ds_step(const Table& state, const MoveSet& moves, const TargetDistribution& target,
              const BoundsGrid& bounds, Rng& rng) {
    if (moves.moves.empty()) return state;
    const Move& m = moves.moves[rng.index(static_cast<int>(moves.moves.size()))];
    const int eps = rng.sign();
    const double u = rng.unit();
    auto proposal = apply_move(state, m, eps, bounds);
    if (!proposal) return state;
    const double lr = target.log_ratio(state, *proposal, m);
    const double alpha = std::min(1.0, std::exp(lr));
    if (alpha > u) return *proposal;
    return state;
}

ChainResult run_chain(const FiberSpec& spec, const Table& start, const MoveSet& moves,
                      const TargetDistribution& target, const ChainConfig& config) {
    if (config.steps <= config.burn_in || config.burn_in < 0 || config.thin < 1)
        throw std::invalid_argument("run_chain: need steps > burn_in >= 0 and thin >= 1");
    if (margins(start, spec.matrix) != spec.target)
        throw std::invalid_argument("run_chain: start table has wrong margins");
    if (!satisfies_bounds(start, spec.bounds))
        throw std::invalid_argument("run_chain: start table violates bounds");
    for (const auto& m : moves.moves) {
        DesignMatrix A = spec.matrix;
        if (!in_kernel(m, A))
            throw std::invalid_argument("run_chain: move set leaves the fiber");
    }

    Rng rng(config.seed);
    ChainResult result;
    Table state = start;
    std::int64_t accepted = 0;
    for (std::int64_t t = 1; t <= config.steps; ++t) {
        Table next = ds_step(state, moves, target, spec.bounds, rng);
        if (next.counts != state.counts) ++accepted;
        state = std::move(next);
        if (t > config.burn_in && (t - config.burn_in) % config.thin == 0) {
            if (margins(state, spec.matrix) != spec.target ||
                !satisfies_bounds(state, spec.bounds))
                result.visited_in_fiber = false;
            result.samples.push_back(state);
        }
    }
    result.acceptance_rate =
        static_cast<double>(accepted) / static_cast<double>(config.steps);
    return result;
}

ChiSquareReport chi_square_uniformity(const std::vector<Table>& samples, const Fiber& fiber,
                                      const TargetDistribution& target) {
    if (samples.empty())
        throw std::invalid_argument("chi_square_uniformity: no samples");
    if (fiber.tables.empty())
        throw std::invalid_argument("chi_square_uniformity: empty fiber");

    struct VecHash {
        size_t operator()(const std::vector<Count>& v) const {
            size_t h = 1469598103934665603ull;
            for (Count x : v) h ^= static_cast<size_t>(x) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
            return h;
        }
    };
    std::unordered_map<std::vector<Count>, size_t, VecHash> index;
    for (size_t t = 0; t < fiber.tables.size(); ++t) index.emplace(fiber.tables[t].counts, t);

    std::vector<double> observed(fiber.tables.size(), 0.0);
    for (const auto& s : samples) {
        auto it = index.find(s.counts);
        if (it == index.end())
            throw std::invalid_argument("chi_square_uniformity: sample outside fiber");
        observed[it->second] += 1.0;
    }

    // normalized target probabilities via log-sum-exp
    std::vector<double> logw(fiber.tables.size());
    for (size_t t = 0; t < fiber.tables.size(); ++t) logw[t] = target.log_weight(fiber.tables[t]);
    const double mx = *std::max_element(logw.begin(), logw.end());
    double z = 0.0;
    for (double lw : logw) z += std::exp(lw - mx);
    const double n = static_cast<double>(samples.size());

    ChiSquareReport report;
    report.dof = static_cast<std::int64_t>(fiber.tables.size()) - 1;
    for (size_t t = 0; t < fiber.tables.size(); ++t) {
        const double expected = n * std::exp(logw[t] - mx) / z;
        const double d = observed[t] - expected;
        report.statistic += d * d / expected;
    }
    report.p_value = report.dof == 0
                         ? 1.0
                         : boost::math::gamma_q(static_cast<double>(report.dof) / 2.0,
                                                report.statistic / 2.0);
    return report;
}

}  // namespace fiberwalk
