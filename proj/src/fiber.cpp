#include "fiberwalk/fiber.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <numeric>
#include <unordered_map>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fiberwalk {

namespace {

struct VecHash {
    size_t operator()(const std::vector<Count>& v) const {
        size_t h = 1469598103934665603ull;
        for (Count x : v) {
            h ^= static_cast<size_t>(x) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        }
        return h;
    }
};

void validate_spec(const FiberSpec& spec) {
    if (spec.bounds.shape.cell_count() != spec.matrix.k)
        throw std::invalid_argument("fiber: bounds shape does not match matrix columns");
    if (static_cast<int>(spec.target.size()) != spec.matrix.s)
        throw std::invalid_argument("fiber: target length does not match matrix rows");
    for (Count t : spec.target)
        if (t < 0) throw std::invalid_argument("fiber: negative target margin");
}

}  // namespace

Fiber enumerate_fiber(const FiberSpec& spec, std::int64_t size_cap) {
    validate_spec(spec);
    const int k = spec.matrix.k, s = spec.matrix.s;
    Fiber fiber{spec, {}};

    // suffix capacity per (cell, margin row): can the remaining cells still
    // absorb the residual? Unbounded cells with a positive coefficient make
    // a row's suffix capacity unlimited.
    std::vector<std::vector<Count>> cap_sum(k + 1, std::vector<Count>(s, 0));
    std::vector<std::vector<char>> cap_inf(k + 1, std::vector<char>(s, 0));
    for (int h = k - 1; h >= 0; --h) {
        for (int r = 0; r < s; ++r) {
            cap_sum[h][r] = cap_sum[h + 1][r];
            cap_inf[h][r] = cap_inf[h + 1][r];
            const Count a = spec.matrix.at(r, h);
            if (a == 0) continue;
            if (spec.bounds.bounds[h])
                cap_sum[h][r] += a * *spec.bounds.bounds[h];
            else
                cap_inf[h][r] = 1;
        }
    }

    std::vector<Count> residual = spec.target;
    std::vector<Count> cell(k, 0);

    // Can the cells from h on still absorb every residual margin?
    auto feasible_suffix = [&](int h) {
        for (int r = 0; r < s; ++r) {
            if (residual[r] < 0) return false;
            if (residual[r] > 0 && !cap_inf[h][r] && residual[r] > cap_sum[h][r]) return false;
        }
        return true;
    };

    // Backtracking in row-major cell order; values ascend, so the output is
    // lexicographically sorted.
    std::function<void(int)> rec = [&](int h) {
        if (h == k) {
            if (static_cast<std::int64_t>(fiber.tables.size()) >= size_cap)
                throw CapExceeded("enumerate_fiber: size cap exceeded",
                                  static_cast<std::int64_t>(fiber.tables.size()));
            fiber.tables.push_back(Table{spec.bounds.shape, cell});
            return;
        }
        Count vmax = spec.bounds.bounds[h] ? *spec.bounds.bounds[h]
                                           : std::numeric_limits<Count>::max();
        for (int r = 0; r < s; ++r) {
            const Count a = spec.matrix.at(r, h);
            if (a > 0) vmax = std::min(vmax, residual[r] / a);
        }
        for (Count v = 0; v <= vmax; ++v) {
            cell[h] = v;
            if (v > 0)
                for (int r = 0; r < s; ++r) residual[r] -= spec.matrix.at(r, h);
            if (feasible_suffix(h + 1)) rec(h + 1);
        }
        for (int r = 0; r < s; ++r) residual[r] += spec.matrix.at(r, h) * cell[h];
        cell[h] = 0;
    };
    if (feasible_suffix(0)) rec(0);
    return fiber;
}

ConnectivityReport connectivity(const Fiber& fiber, const MoveSet& moves) {
    if (moves.cell_count != fiber.spec.matrix.k)
        throw std::invalid_argument("connectivity: move cell count != fiber cells");
    ConnectivityReport report;
    const size_t n = fiber.size();
    report.component.assign(n, -1);

    std::unordered_map<std::vector<Count>, int, VecHash> index;
    index.reserve(n * 2);
    for (size_t t = 0; t < n; ++t) index.emplace(fiber.tables[t].counts, static_cast<int>(t));

    std::vector<int> queue;
    for (size_t start = 0; start < n; ++start) {
        if (report.component[start] >= 0) continue;
        const int comp = report.component_count++;
        report.component[start] = comp;
        queue.assign(1, static_cast<int>(start));
        for (size_t qh = 0; qh < queue.size(); ++qh) {
            const Table& cur = fiber.tables[queue[qh]];
            for (const auto& m : moves.moves) {
                for (int sign : {+1, -1}) {
                    auto next = apply_move(cur, m, sign, fiber.spec.bounds);
                    if (!next) continue;
                    auto it = index.find(next->counts);
                    if (it == index.end()) continue;  // outside this fiber slice
                    if (report.component[it->second] < 0) {
                        report.component[it->second] = comp;
                        queue.push_back(it->second);
                    }
                }
            }
        }
    }
    if (report.component_count > 1) {
        int first_other = -1;
        for (size_t t = 0; t < n && first_other < 0; ++t)
            if (report.component[t] != report.component[0]) first_other = static_cast<int>(t);
        report.witness = std::make_pair(0, first_other);
    }
    return report;
}

namespace {

// Compositions of `total` into `parts` nonnegative (or positive) summands.
void compositions(Count total, int parts, bool positive, std::vector<Count>& cur,
                  std::vector<std::vector<Count>>& out) {
    if (parts == 1) {
        if (!positive || total >= 1) {
            cur.push_back(total);
            out.push_back(cur);
            cur.pop_back();
        }
        return;
    }
    for (Count v = positive ? 1 : 0; v <= total - (positive ? parts - 1 : 0); ++v) {
        cur.push_back(v);
        compositions(total - v, parts - 1, positive, cur, out);
        cur.pop_back();
    }
}

bool is_two_way(const DesignMatrix& A, Shape shape) {
    if (shape.rows < 1 || shape.cols < 1) return false;
    if (shape.cell_count() != A.k || A.s != shape.rows + shape.cols) return false;
    const DesignMatrix ref = two_way_design(shape);
    return ref.entries == A.entries;
}

// Distinct margin images A*n over all tables with total <= cap.
std::vector<std::vector<Count>> image_targets(const DesignMatrix& A, Shape shape,
                                              Count total_cap) {
    if (A.k > 12)
        throw CapExceeded("verify_subbasis: general margin enumeration limited to k <= 12",
                          A.k);
    std::vector<std::vector<Count>> out;
    std::vector<Count> n(A.k, 0);
    Table t{shape, n};
    // enumerate tables with total <= cap by backtracking
    std::vector<Count> cells(A.k, 0);
    std::function<void(int, Count)> rec = [&](int h, Count used) {
        if (h == A.k) {
            Table tab{shape, cells};
            out.push_back(margins(tab, A));
            return;
        }
        for (Count v = 0; used + v <= total_cap; ++v) {
            cells[h] = v;
            rec(h + 1, used + v);
        }
        cells[h] = 0;
    };
    rec(0, 0);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace

std::vector<std::vector<Count>> two_way_targets(Shape shape, Count total_cap, bool positive) {
    std::vector<std::vector<Count>> out;
    const Count min_total = positive ? std::max(shape.rows, shape.cols) : 0;
    for (Count total = min_total; total <= total_cap; ++total) {
        std::vector<std::vector<Count>> rows_c, cols_c;
        std::vector<Count> cur;
        compositions(total, shape.rows, positive, cur, rows_c);
        compositions(total, shape.cols, positive, cur, cols_c);
        for (const auto& r : rows_c)
            for (const auto& c : cols_c) {
                std::vector<Count> t = r;
                t.insert(t.end(), c.begin(), c.end());
                out.push_back(std::move(t));
            }
    }
    return out;
}

SubbasisReport verify_subbasis(const DesignMatrix& A, Shape shape, const MoveSet& moves,
                               const std::vector<BoundsGrid>& bounds_family,
                               const SweepOptions& options) {
    if (bounds_family.empty())
        throw std::invalid_argument("verify_subbasis: empty bounds family");
    const auto targets = is_two_way(A, shape)
                             ? two_way_targets(shape, options.margin_total_cap,
                                               options.require_positive_margins)
                             : image_targets(A, shape, options.margin_total_cap);

    struct Job {
        size_t target_idx, bounds_idx;
    };
    std::vector<Job> jobs;
    jobs.reserve(targets.size() * bounds_family.size());
    for (size_t ti = 0; ti < targets.size(); ++ti)
        for (size_t bi = 0; bi < bounds_family.size(); ++bi) jobs.push_back({ti, bi});

    enum : char { kConnected, kEmpty, kDisconnected, kInconclusive };
    std::vector<char> verdict(jobs.size(), kConnected);
    std::vector<std::pair<Table, Table>> witnesses(jobs.size());

#pragma omp parallel for schedule(dynamic)
    for (size_t ji = 0; ji < jobs.size(); ++ji) {
        const FiberSpec spec{A, targets[jobs[ji].target_idx], bounds_family[jobs[ji].bounds_idx]};
        try {
            const Fiber fiber = enumerate_fiber(spec, options.fiber_size_cap);
            if (fiber.tables.empty()) {
                verdict[ji] = kEmpty;
                continue;
            }
            const ConnectivityReport report = connectivity(fiber, moves);
            if (report.component_count > 1) {
                verdict[ji] = kDisconnected;
                witnesses[ji] = {fiber.tables[report.witness->first],
                                 fiber.tables[report.witness->second]};
            }
        } catch (const CapExceeded&) {
            verdict[ji] = kInconclusive;
        }
    }

    SubbasisReport report;
    for (size_t ji = 0; ji < jobs.size(); ++ji) {
        ++report.fibers_checked;
        switch (verdict[ji]) {
            case kEmpty:
                ++report.empty_fibers;
                break;
            case kInconclusive:
                ++report.inconclusive;
                break;
            case kDisconnected:
                if (report.status == SubbasisReport::Status::ConnectedUpToCap) {
                    report.status = SubbasisReport::Status::Disconnected;
                    report.witness = DisconnectionWitness{
                        FiberSpec{A, targets[jobs[ji].target_idx],
                                  bounds_family[jobs[ji].bounds_idx]},
                        witnesses[ji].first, witnesses[ji].second};
                }
                break;
            default:
                break;
        }
    }
    return report;
}

CellSet canonical_zero_pattern(Shape shape, const CellSet& zeros) {
    std::vector<int> rperm(shape.rows), cperm(shape.cols);
    std::iota(rperm.begin(), rperm.end(), 0);
    CellSet best;
    bool have = false;
    do {
        std::iota(cperm.begin(), cperm.end(), 0);
        do {
            CellSet mapped;
            for (const auto& [i, j] : zeros) mapped.insert({rperm[i], cperm[j]});
            if (!have || mapped < best) {
                best = std::move(mapped);
                have = true;
            }
        } while (std::next_permutation(cperm.begin(), cperm.end()));
    } while (std::next_permutation(rperm.begin(), rperm.end()));
    return best;
}

std::vector<PatternVerdict> pattern_search(Shape shape, const PatternSearchOptions& options) {
    if (shape.rows > 4 || shape.cols > 4)
        throw std::invalid_argument("pattern_search: shapes beyond 4x4 not supported");
    const int k = shape.cell_count();
    std::vector<CellSet> patterns;
    {
        std::set<CellSet> seen;
        std::vector<int> pick;
        std::function<void(int)> rec = [&](int start) {
            if (!pick.empty() && static_cast<int>(pick.size()) <= options.max_zero_cells) {
                CellSet zs;
                for (int h : pick) zs.insert(shape.cell(h));
                seen.insert(canonical_zero_pattern(shape, zs));
            }
            if (static_cast<int>(pick.size()) == options.max_zero_cells) return;
            for (int h = start; h < k; ++h) {
                pick.push_back(h);
                rec(h + 1);
                pick.pop_back();
            }
        };
        rec(0);
        patterns.assign(seen.begin(), seen.end());
    }

    const DesignMatrix A = two_way_design(shape);
    const MoveSet basics = basic_moves(shape);
    SweepOptions sweep = options.sweep;
    sweep.require_positive_margins = true;

    std::vector<PatternVerdict> verdicts(patterns.size());
#pragma omp parallel for schedule(dynamic)
    for (size_t p = 0; p < patterns.size(); ++p) {
        const BoundsGrid grid = BoundsGrid::with_zeros(shape, patterns[p]);
        verdicts[p] = PatternVerdict{patterns[p],
                                     verify_subbasis(A, shape, basics, {grid}, sweep)};
    }
    return verdicts;
}

}  // namespace fiberwalk
