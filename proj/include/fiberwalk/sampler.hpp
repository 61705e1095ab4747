#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "fiberwalk/core.hpp"
#include "fiberwalk/fiber.hpp"
#include "fiberwalk/moves.hpp"

namespace fiberwalk {

/// Deterministic 64-bit generator: std::mt19937_64, whose output stream is
/// pinned by the standard, with fixed derivations for indices, signs and
/// unit doubles. Same seed, same stream, on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next() { return eng_(); }
    /// Uniform in [0, 1): top 53 bits scaled.
    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    /// Uniform index in [0, n) by 128-bit fixed-point scaling.
    int index(int n) {
        return static_cast<int>((static_cast<unsigned __int128>(next()) *
                                 static_cast<unsigned __int128>(n)) >>
                                64);
    }
    int sign() { return (next() & 1) ? +1 : -1; }

    /// Stream for chain `idx` derived by splitmix-style seed mixing.
    static std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t idx);

private:
    std::mt19937_64 eng_;
};

/// Distribution on the fiber, up to normalization.
struct TargetDistribution {
    enum class Kind { Uniform, Hypergeometric, Custom };
    Kind kind = Kind::Uniform;
    std::function<double(const Table&)> custom_log_weight;

    static TargetDistribution uniform() { return {Kind::Uniform, nullptr}; }
    /// weight(n) proportional to prod_h 1/n_h!, the exact-test null.
    static TargetDistribution hypergeometric() { return {Kind::Hypergeometric, nullptr}; }
    static TargetDistribution custom(std::function<double(const Table&)> f) {
        return {Kind::Custom, std::move(f)};
    }

    double log_weight(const Table& t) const;
    /// log sigma(after) - log sigma(before); builtin kinds only touch the
    /// move's support.
    double log_ratio(const Table& before, const Table& after, const Move& move) const;
};

struct ChainConfig {
    std::uint64_t seed = 20240101;
    std::int64_t steps = 10'000;
    std::int64_t burn_in = 1'000;
    std::int64_t thin = 10;
};

struct ChainResult {
    std::vector<Table> samples;
    double acceptance_rate = 0.0;
    bool visited_in_fiber = true;
};

/// One Metropolis step: uniform move and sign, uniform u, accept when the
/// proposal stays in the bounded fiber and min{ratio, 1} > u; stays put
/// otherwise. Exactly one (move, sign, u) triple is drawn per call.
Table ds_step(const Table& state, const MoveSet& moves, const TargetDistribution& target,
              const BoundsGrid& bounds, Rng& rng);

/// Runs ds_step for config.steps, recording every thin-th state after
/// burn_in. The start table must lie in the fiber.
ChainResult run_chain(const FiberSpec& spec, const Table& start, const MoveSet& moves,
                      const TargetDistribution& target, const ChainConfig& config);

struct ChiSquareReport {
    double statistic = 0.0;
    double p_value = 1.0;
    std::int64_t dof = 0;
};

/// Pearson goodness-of-fit of the samples against the target on a fully
/// enumerated fiber; p-value from the chi-square upper tail with |F|-1
/// degrees of freedom.
ChiSquareReport chi_square_uniformity(const std::vector<Table>& samples, const Fiber& fiber,
                                      const TargetDistribution& target);

}  // namespace fiberwalk
