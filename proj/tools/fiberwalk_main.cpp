// fiberwalk: Markov move sets, fiber connectivity and Monte Carlo sampling
// for bounded and incomplete contingency tables.
//
// Exit codes: 0 ok, 2 usage error, 3 resource cap exceeded, 4 verification
// failure (disconnection witness under --expect-connected, or golden-value
// mismatch in `repro`).
#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <set>
#include <sstream>

#include "fiberwalk/core.hpp"
#include "fiberwalk/fiber.hpp"
#include "fiberwalk/json_io.hpp"
#include "fiberwalk/lattice.hpp"
#include "fiberwalk/moves.hpp"
#include "fiberwalk/sampler.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace fiberwalk;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitCap = 3;
constexpr int kExitVerify = 4;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::int64_t env_int(const char* name, std::int64_t fallback) {
    const char* v = std::getenv(name);
    if (!v || !*v) return fallback;
    return std::strtoll(v, nullptr, 10);
}

// "1,1;2,3" with 1-based cells -> CellSet (0-based)
CellSet parse_cells(const std::string& text, Shape shape) {
    CellSet out;
    if (text.empty()) return out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ';')) {
        int i, j;
        char comma;
        std::stringstream cs(item);
        if (!(cs >> i >> comma >> j) || comma != ',')
            throw UsageError("bad cell list entry '" + item + "' (want i,j;i,j with 1-based indices)");
        if (i < 1 || i > shape.rows || j < 1 || j > shape.cols)
            throw UsageError("cell (" + std::to_string(i) + "," + std::to_string(j) + ") out of range");
        out.insert({i - 1, j - 1});
    }
    return out;
}

std::vector<Count> parse_counts(const std::string& text) {
    std::vector<Count> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stoll(item));
    return out;
}

std::vector<int> parse_indices(const std::string& text) {
    std::vector<int> out;
    for (Count v : parse_counts(text)) out.push_back(static_cast<int>(v));
    return out;
}

DesignMatrix load_model(const std::string& model, Shape shape) {
    if (model == "two-way") return two_way_design(shape);
    if (model.rfind("file:", 0) == 0)
        return io::design_from_json(io::read_json_file(model.substr(5)));
    throw UsageError("unknown model '" + model + "' (want two-way or file:PATH)");
}

BoundsGrid load_bounds(const std::string& text, Shape shape) {
    if (text.empty() || text == "none") return BoundsGrid::unbounded(shape);
    if (text.rfind("uniform:", 0) == 0)
        return BoundsGrid::uniform(shape, std::stoll(text.substr(8)));
    if (text.rfind("zeros:", 0) == 0)
        return BoundsGrid::with_zeros(shape, parse_cells(text.substr(6), shape));
    if (text.rfind("file:", 0) == 0)
        return io::bounds_from_json(io::read_json_file(text.substr(5)), shape);
    throw UsageError("unknown bounds '" + text + "' (want none, uniform:B, zeros:LIST or file:PATH)");
}

MoveSet load_moves(const std::string& text, Shape shape, Count norm_cap) {
    if (text == "basic") return basic_moves(shape);
    if (text == "circuits") return circuit_moves(shape);
    if (text == "df1") return df1_loops(shape, {}).moves;
    if (text == "universal") {
        const LiftSpec spec = LiftSpec::all_bounded(IntMatrix::from_design(two_way_design(shape)));
        MoveSet ms = universal_markov_basis(spec, norm_cap).moves;
        ms.rows = shape.rows;
        ms.cols = shape.cols;
        return ms;
    }
    if (text.rfind("file:", 0) == 0)
        return io::moveset_from_json(io::read_json_file(text.substr(5)));
    throw UsageError("unknown move set '" + text + "'");
}

json witness_json(const DisconnectionWitness& w) {
    return json{{"margins", w.spec.target},
                {"bounds", io::bounds_to_json(w.spec.bounds)},
                {"table_a", w.a.counts},
                {"table_b", w.b.counts}};
}

void emit(const json& j, const std::string& out_path) {
    if (out_path.empty())
        std::cout << j.dump(2) << '\n';
    else
        io::write_json_file(out_path, j);
}

// ---------------------------------------------------------------- moves ---

struct MovesArgs {
    std::string kind;
    int rows = 3, cols = 3;
    std::string zeros, loop_rows, loop_cols, bounded, model;
    bool count_only = false;
    Count norm_cap = 64;
    std::string out;
};

int run_moves(const MovesArgs& a) {
    const Shape shape{a.rows, a.cols};
    MoveSet ms;
    json extra;
    if (a.kind == "basic") {
        ms = basic_moves(shape);
    } else if (a.kind == "circuits") {
        if (a.count_only && a.zeros.empty()) {
            const CycleCounts c = count_circuit_moves(shape);
            json by;
            for (const auto& [s, n] : c.by_support) by[std::to_string(s)] = n;
            emit(json{{"total", c.total}, {"by_support", by}}, a.out);
            return kExitOk;
        }
        if (count_circuit_moves(shape).total > 1'000'000)
            throw CapExceeded("moves circuits: set too large to materialize; use --count-only",
                              count_circuit_moves(shape).total);
        ms = circuit_moves(shape);
    } else if (a.kind == "loops") {
        if (a.loop_rows.empty() || a.loop_cols.empty())
            throw UsageError("moves loops: need --loop-rows and --loop-cols (1-based)");
        auto rows = parse_indices(a.loop_rows);
        auto cols = parse_indices(a.loop_cols);
        for (auto& r : rows) --r;
        for (auto& c : cols) --c;
        ms = MoveSet{a.rows, a.cols, shape.cell_count(), {loop_move(shape, rows, cols)}};
    } else if (a.kind == "df1") {
        const Df1Result r = df1_loops(shape, parse_cells(a.zeros, shape));
        ms = r.moves;
        if (!r.zeroed_rows.empty()) extra["zeroed_rows"] = r.zeroed_rows;
        if (!r.zeroed_cols.empty()) extra["zeroed_cols"] = r.zeroed_cols;
    } else if (a.kind == "universal") {
        LiftSpec spec{IntMatrix::from_design(a.model.empty() ? two_way_design(shape)
                                                             : load_model(a.model, shape)),
                      {}};
        if (a.bounded.empty() || a.bounded == "all") {
            spec = LiftSpec::all_bounded(std::move(spec.base));
        } else if (a.bounded == "none") {
            // kept empty: the lift degenerates to the base matrix
        } else if (a.bounded.rfind("file:", 0) == 0) {
            const json j = io::read_json_file(a.bounded.substr(5));
            for (int idx : j.get<std::vector<int>>()) spec.bounded_cells.push_back(idx - 1);
        } else if (a.model.empty()) {  // two-way: cell pairs
            for (const auto& [i, j] : parse_cells(a.bounded, shape))
                spec.bounded_cells.push_back(shape.index(i, j));
        } else {  // general matrix: 1-based column indices
            for (int idx : parse_indices(a.bounded)) spec.bounded_cells.push_back(idx - 1);
        }
        std::sort(spec.bounded_cells.begin(), spec.bounded_cells.end());
        const UniversalBasisResult r = universal_markov_basis(spec, a.norm_cap);
        ms = r.moves;
        extra["pre_dedupe_count"] = r.pre_dedupe_count;
        if (a.model.empty()) {
            ms.rows = a.rows;
            ms.cols = a.cols;
            if (!a.zeros.empty())
                ms = filter_structural_zeros(ms, parse_cells(a.zeros, shape));
        }
    } else {
        throw UsageError("unknown moves kind '" + a.kind + "'");
    }

    if (a.kind != "universal" && a.kind != "df1" && !a.zeros.empty())
        ms = filter_structural_zeros(ms, parse_cells(a.zeros, shape));

    if (a.count_only) {
        json by;
        for (const auto& [s, n] : ms.support_histogram()) by[std::to_string(s)] = n;
        json j{{"total", ms.size()}, {"by_support", by}};
        if (!extra.empty()) j["info"] = extra;
        emit(j, a.out);
        return kExitOk;
    }
    json j = io::moveset_to_json(ms);
    if (!extra.empty()) j["info"] = extra;
    emit(j, a.out);
    return kExitOk;
}

// ---------------------------------------------------------------- fiber ---

struct FiberArgs {
    std::string action;
    int rows = 3, cols = 3;
    std::string table, row_sums, col_sums, margins_list;
    std::string model = "two-way";
    std::string bounds;
    std::string moves = "basic";
    Count cap = env_int("FIBERWALK_MARGIN_CAP", 8);
    std::int64_t fiber_cap = env_int("FIBERWALK_FIBER_CAP", 200'000);
    Count norm_cap = env_int("FIBERWALK_NORM_CAP", 64);
    bool positive = false;
    bool expect_connected = false;
    bool theorem_main = false;
    std::string bounds_list = "1,2";
    int max_zeros = 3;
    std::string format = "json";
    std::string out;
};

FiberSpec make_spec(const FiberArgs& a) {
    const Shape shape{a.rows, a.cols};
    const DesignMatrix A = load_model(a.model, shape);
    std::vector<Count> target;
    if (!a.table.empty()) {
        const Table t = io::table_from_json(io::read_json_file(a.table));
        target = margins(t, A);
    } else if (!a.margins_list.empty()) {
        target = parse_counts(a.margins_list);
    } else if (!a.row_sums.empty() && !a.col_sums.empty()) {
        target = parse_counts(a.row_sums);
        const auto cols = parse_counts(a.col_sums);
        target.insert(target.end(), cols.begin(), cols.end());
    } else {
        throw UsageError("fiber: need --table, --margins, or --row-sums/--col-sums");
    }
    return FiberSpec{A, target, load_bounds(a.bounds, shape)};
}

int run_fiber(const FiberArgs& a) {
    const Shape shape{a.rows, a.cols};
    if (a.action == "enum") {
        const Fiber f = enumerate_fiber(make_spec(a), a.fiber_cap);
        json tables = json::array();
        for (const auto& t : f.tables) tables.push_back(t.counts);
        emit(json{{"size", f.size()}, {"margins", f.spec.target}, {"tables", tables}}, a.out);
        return kExitOk;
    }
    if (a.action == "connect") {
        const FiberSpec spec = make_spec(a);
        const Fiber f = enumerate_fiber(spec, a.fiber_cap);
        const MoveSet moves = load_moves(a.moves, shape, a.norm_cap);
        const ConnectivityReport r = connectivity(f, moves);
        json j{{"size", f.size()}, {"components", r.component_count},
               {"component_of", r.component}};
        if (r.witness)
            j["witness"] = json{{"table_a", f.tables[r.witness->first].counts},
                                {"table_b", f.tables[r.witness->second].counts}};
        emit(j, a.out);
        if (a.expect_connected && r.component_count > 1) return kExitVerify;
        return kExitOk;
    }
    if (a.action == "verify") {
        const DesignMatrix A = load_model(a.model, shape);
        const MoveSet moves = load_moves(a.moves, shape, a.norm_cap);
        std::vector<BoundsGrid> family;
        if (a.theorem_main) {
            for (Count b : parse_counts(a.bounds_list))
                family.push_back(BoundsGrid::uniform(shape, b));
        } else {
            family.push_back(load_bounds(a.bounds, shape));
        }
        SweepOptions opts;
        opts.margin_total_cap = a.cap;
        opts.require_positive_margins = a.positive || a.theorem_main;
        opts.fiber_size_cap = a.fiber_cap;
        const SubbasisReport r = verify_subbasis(A, shape, moves, family, opts);
        json j{{"status", r.status == SubbasisReport::Status::ConnectedUpToCap
                              ? "connected-up-to-cap"
                              : "disconnected"},
               {"fibers_checked", r.fibers_checked},
               {"empty_fibers", r.empty_fibers},
               {"inconclusive", r.inconclusive},
               {"margin_total_cap", a.cap}};
        if (r.witness) j["witness"] = witness_json(*r.witness);
        emit(j, a.out);
        if (a.expect_connected && r.status == SubbasisReport::Status::Disconnected)
            return kExitVerify;
        return kExitOk;
    }
    if (a.action == "search") {
        PatternSearchOptions opts;
        opts.max_zero_cells = a.max_zeros;
        opts.sweep.margin_total_cap = a.cap;
        opts.sweep.fiber_size_cap = a.fiber_cap;
        const auto verdicts = pattern_search(shape, opts);
        std::ostringstream body;
        for (const auto& v : verdicts) {
            const bool bad = v.report.status == SubbasisReport::Status::Disconnected;
            if (a.format == "csv") {
                body << '"';
                for (const auto& [i, j] : v.zeros) body << '(' << i + 1 << ',' << j + 1 << ')';
                body << "\"," << (bad ? "disconnected" : "connected-up-to-cap") << ','
                     << v.report.inconclusive << '\n';
            } else {
                json cells = json::array();
                for (const auto& [i, j] : v.zeros) cells.push_back({i + 1, j + 1});
                json rec{{"zeros", cells},
                         {"status", bad ? "disconnected" : "connected-up-to-cap"},
                         {"inconclusive", v.report.inconclusive}};
                if (v.report.witness) rec["witness"] = witness_json(*v.report.witness);
                body << rec.dump() << '\n';
            }
        }
        if (a.out.empty())
            std::cout << body.str();
        else {
            std::ofstream f(a.out);
            f << body.str();
        }
        return kExitOk;
    }
    throw UsageError("unknown fiber action '" + a.action + "'");
}

// --------------------------------------------------------------- sample ---

struct SampleArgs {
    std::string table;
    std::string bounds;
    std::string model = "two-way";
    std::string moves = "basic";
    std::string target = "uniform";
    std::uint64_t seed = 20240101;
    std::int64_t steps = 10'000;
    std::int64_t burn_in = 1'000;
    std::int64_t thin = 10;
    int chains = 1;
    bool emit_samples = false;
    bool chi_square = false;
    std::int64_t fiber_cap = env_int("FIBERWALK_FIBER_CAP", 200'000);
    Count norm_cap = env_int("FIBERWALK_NORM_CAP", 64);
    std::string out;
};

int run_sample(const SampleArgs& a) {
    if (a.table.empty()) throw UsageError("sample: need --table");
    const Table start = io::table_from_json(io::read_json_file(a.table));
    const Shape shape = start.shape;
    const DesignMatrix A = load_model(a.model, shape);
    const FiberSpec spec{A, margins(start, A), load_bounds(a.bounds, shape)};
    const MoveSet moves = load_moves(a.moves, shape, a.norm_cap);
    TargetDistribution target = TargetDistribution::uniform();
    if (a.target == "hypergeometric")
        target = TargetDistribution::hypergeometric();
    else if (a.target != "uniform")
        throw UsageError("sample: unknown target '" + a.target + "'");

    json chains = json::array();
    std::vector<Table> all_samples;
    double acc_sum = 0.0;
    for (int c = 0; c < a.chains; ++c) {
        ChainConfig cfg;
        cfg.seed = a.chains == 1 ? a.seed : Rng::derive_seed(a.seed, static_cast<std::uint64_t>(c));
        cfg.steps = a.steps;
        cfg.burn_in = a.burn_in;
        cfg.thin = a.thin;
        const ChainResult r = run_chain(spec, start, moves, target, cfg);
        acc_sum += r.acceptance_rate;
        chains.push_back(json{{"seed", cfg.seed},
                              {"acceptance_rate", r.acceptance_rate},
                              {"samples_recorded", r.samples.size()},
                              {"visited_in_fiber", r.visited_in_fiber}});
        all_samples.insert(all_samples.end(), r.samples.begin(), r.samples.end());
    }

    json j{{"seed", a.seed},
           {"target", a.target},
           {"steps", a.steps},
           {"burn_in", a.burn_in},
           {"thin", a.thin},
           {"chains", chains},
           {"acceptance_rate", acc_sum / a.chains}};
    if (a.emit_samples) {
        json samples = json::array();
        for (const auto& s : all_samples) samples.push_back(s.counts);
        j["samples"] = samples;
    }
    if (a.chi_square) {
        const Fiber fiber = enumerate_fiber(spec, a.fiber_cap);
        const ChiSquareReport rep = chi_square_uniformity(all_samples, fiber, target);
        j["chi_square"] = json{{"statistic", rep.statistic},
                               {"p_value", rep.p_value},
                               {"dof", rep.dof},
                               {"fiber_size", fiber.size()}};
    }
    emit(j, a.out);
    return kExitOk;
}

// ---------------------------------------------------------------- repro ---

struct ReproArgs {
    std::string name;
    bool slow = false;
};

struct ReproContext {
    int mismatches = 0;
    int skips = 0;

    void check(const std::string& label, std::int64_t got, std::int64_t want) {
        if (got == want) {
            std::cout << "[ok]       " << label << " = " << got << "\n";
        } else {
            std::cout << "[MISMATCH] " << label << ": got " << got << ", expected " << want
                      << "\n";
            ++mismatches;
        }
    }
    void check_flag(const std::string& label, bool ok) {
        std::cout << (ok ? "[ok]       " : "[MISMATCH] ") << label << "\n";
        if (!ok) ++mismatches;
    }
    void skip(const std::string& label, const std::string& why) {
        std::cout << "[skip]     " << label << ": " << why << "\n";
        ++skips;
    }
    // gated checks are not cap events; they do not affect the exit code
    void gated(const std::string& label, const std::string& why) {
        std::cout << "[off]      " << label << ": " << why << "\n";
    }
};

IntMatrix cube_design() {
    IntMatrix A = IntMatrix::zero(6, 8);
    for (int h = 0; h < 8; ++h) {
        A.at(h >> 2, h) = 1;
        A.at(2 + ((h >> 1) & 1), h) = 1;
        A.at(4 + (h & 1), h) = 1;
    }
    return A;
}

int run_repro(const ReproArgs& a) {
    ReproContext ctx;
    if (a.name == "exind") {
        const std::int64_t basics[] = {1, 9, 36, 100, 225, 441};
        for (int I = 2; I <= 7; ++I)
            ctx.check("basic moves " + std::to_string(I) + "x" + std::to_string(I),
                      static_cast<std::int64_t>(basic_moves({I, I}).size()), basics[I - 2]);
        const std::int64_t universal[] = {1, 15, 204, 3940, 113865};
        for (int I = 2; I <= 6; ++I)
            ctx.check("universal basis " + std::to_string(I) + "x" + std::to_string(I),
                      count_circuit_moves({I, I}).total, universal[I - 2]);
        if (a.slow)
            ctx.check("universal basis 7x7", count_circuit_moves({7, 7}).total, 4'027'161);
        else
            ctx.gated("universal basis 7x7", "enable with --slow");
    } else if (a.name == "exind2") {
        const MoveSet u = circuit_moves({4, 4});
        const MoveSet corner = filter_structural_zeros(u, {{0, 0}});
        ctx.check("zero at (1,1): remaining moves", corner.size(), 123);
        ctx.check("zero at (1,1): support-4 removed", 36 - corner.support_histogram().at(4), 9);
        ctx.check("zero at (1,1): support-6 removed", 96 - corner.support_histogram().at(6), 36);
        ctx.check("zero at (1,1): support-8 removed", 72 - corner.support_histogram().at(8), 36);
        const MoveSet diag = filter_structural_zeros(u, {{0, 0}, {1, 1}, {2, 2}, {3, 3}});
        ctx.check("diagonal zeros: remaining moves", diag.size(), 28);
        ctx.check("diagonal zeros: support-4 removed", 36 - diag.support_histogram().at(4), 30);
        ctx.check("diagonal zeros: support-6 removed", 96 - diag.support_histogram().at(6), 80);
        ctx.check("diagonal zeros: support-8 removed", 72 - diag.support_histogram().at(8), 66);
    } else if (a.name == "eg4") {
        const IntMatrix A = IntMatrix::from_design(two_way_design({3, 3}));
        const struct {
            const char* label;
            std::vector<int> bounded;
            std::int64_t want;
        } cases[] = {
            {"all cells bounded", {0, 1, 2, 3, 4, 5, 6, 7, 8}, 15},
            {"bound on (1,1) only", {0}, 10},
            {"bounds on the diagonal", {0, 4, 8}, 13},
            {"bounds on the 5 block-diagonal cells", {0, 4, 5, 7, 8}, 12},
            {"bounds on all but (1,1)", {1, 2, 3, 4, 5, 6, 7, 8}, 13},
        };
        for (const auto& c : cases) {
            const UniversalBasisResult r = universal_markov_basis(LiftSpec{A, c.bounded});
            ctx.check(c.label, static_cast<std::int64_t>(r.moves.size()), c.want);
        }
    } else if (a.name == "qi6x6") {
        const CellSet zeros{{0, 0}, {0, 3}, {0, 4}, {1, 1}, {1, 4}, {1, 5},
                            {2, 2}, {2, 3}, {2, 5}, {3, 0}, {3, 1}, {3, 3},
                            {4, 1}, {4, 2}, {4, 4}, {5, 0}, {5, 2}, {5, 5}};
        const Df1Result r = df1_loops({6, 6}, zeros);
        const auto hist = r.moves.support_histogram();
        ctx.check("df-1 moves total", r.moves.size(), 23);
        ctx.check("basic moves", hist.count(4) ? hist.at(4) : 0, 3);
        ctx.check("degree-3 loops", hist.count(6) ? hist.at(6) : 0, 20);
    } else if (a.name == "fraction") {
        const MoveSet cube = graver_basis(cube_design());
        ctx.check("complete 2x2x2 universal basis", cube.size(), 20);
        DesignMatrix frac{6, 4, {1, 1, 0, 0, 0, 0, 1, 1, 1, 1, 0, 0,
                                 0, 0, 1, 1, 1, 0, 1, 0, 0, 1, 0, 1}};
        const MoveSet mb = graver_basis(IntMatrix::from_design(frac));
        ctx.check("fraction basis size", mb.size(), 1);
        ctx.check_flag("fraction move is the listed one",
                       mb.size() == 1 && mb.moves[0] == make_move_dense({1, -1, -1, 1}));
        SweepOptions opts;
        opts.margin_total_cap = 8;
        try {
            const SubbasisReport r = verify_subbasis(frac, {1, 4}, mb,
                                                     {BoundsGrid::unbounded({1, 4})}, opts);
            ctx.check_flag("single move connects all fibers with totals <= 8",
                           r.status == SubbasisReport::Status::ConnectedUpToCap &&
                               r.inconclusive == 0);
        } catch (const CapExceeded& e) {
            ctx.skip("fraction connectivity sweep", e.what());
        }
    } else {
        throw UsageError("unknown repro target '" + a.name +
                         "' (want exind, exind2, eg4, qi6x6 or fraction)");
    }
    if (ctx.mismatches > 0) return kExitVerify;
    if (ctx.skips > 0) return kExitCap;
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Markov move sets, fiber connectivity and exact-test sampling "
                 "for bounded contingency tables"};
    app.require_subcommand(1);
    int threads = 0;
    app.add_option("--threads", threads, "worker threads (0 = all cores)");

    MovesArgs ma;
    auto* moves_cmd = app.add_subcommand("moves", "generate move sets");
    moves_cmd->add_option("kind", ma.kind, "basic|circuits|loops|df1|universal")->required();
    moves_cmd->add_option("--rows", ma.rows);
    moves_cmd->add_option("--cols", ma.cols);
    moves_cmd->add_option("--zeros", ma.zeros, "structural zeros, e.g. 1,1;2,3");
    moves_cmd->add_option("--loop-rows", ma.loop_rows);
    moves_cmd->add_option("--loop-cols", ma.loop_cols);
    moves_cmd->add_option("--bounded-cells", ma.bounded, "all|none|1,1;2,2|file:PATH");
    moves_cmd->add_option("--model", ma.model, "empty (two-way) or file:PATH");
    moves_cmd->add_flag("--count-only", ma.count_only);
    moves_cmd->add_option("--norm-cap", ma.norm_cap);
    moves_cmd->add_option("--out", ma.out);

    FiberArgs fa;
    auto* fiber_cmd = app.add_subcommand("fiber", "enumerate and verify fibers");
    fiber_cmd->add_option("action", fa.action, "enum|connect|verify|search")->required();
    fiber_cmd->add_option("--rows", fa.rows);
    fiber_cmd->add_option("--cols", fa.cols);
    fiber_cmd->add_option("--table", fa.table, "observed table JSON (margins derived)");
    fiber_cmd->add_option("--row-sums", fa.row_sums);
    fiber_cmd->add_option("--col-sums", fa.col_sums);
    fiber_cmd->add_option("--margins", fa.margins_list, "raw margin vector");
    fiber_cmd->add_option("--model", fa.model);
    fiber_cmd->add_option("--bounds", fa.bounds, "none|uniform:B|zeros:LIST|file:PATH");
    fiber_cmd->add_option("--moves", fa.moves, "basic|circuits|df1|universal|file:PATH");
    fiber_cmd->add_option("--cap", fa.cap, "margin total cap for sweeps");
    fiber_cmd->add_option("--fiber-cap", fa.fiber_cap);
    fiber_cmd->add_flag("--positive-margins", fa.positive);
    fiber_cmd->add_flag("--expect-connected", fa.expect_connected,
                        "exit 4 when a disconnection witness is found");
    fiber_cmd->add_flag("--theorem-main", fa.theorem_main,
                        "basic moves against uniform positive bounds");
    fiber_cmd->add_option("--bounds-list", fa.bounds_list, "uniform bounds for --theorem-main");
    fiber_cmd->add_option("--max-zeros", fa.max_zeros);
    fiber_cmd->add_option("--format", fa.format, "json|csv (search reports)");
    fiber_cmd->add_option("--out", fa.out);

    SampleArgs sa;
    auto* sample_cmd = app.add_subcommand("sample", "run the Metropolis chain");
    sample_cmd->add_option("--table", sa.table)->required();
    sample_cmd->add_option("--bounds", sa.bounds);
    sample_cmd->add_option("--model", sa.model);
    sample_cmd->add_option("--moves", sa.moves);
    sample_cmd->add_option("--target", sa.target, "uniform|hypergeometric");
    sample_cmd->add_option("--seed", sa.seed);
    sample_cmd->add_option("--steps", sa.steps);
    sample_cmd->add_option("--burn-in", sa.burn_in);
    sample_cmd->add_option("--thin", sa.thin);
    sample_cmd->add_option("--chains", sa.chains);
    sample_cmd->add_flag("--emit-samples", sa.emit_samples);
    sample_cmd->add_flag("--chi-square", sa.chi_square);
    sample_cmd->add_option("--out", sa.out);

    ReproArgs ra;
    auto* repro_cmd = app.add_subcommand("repro", "recompute published figures");
    repro_cmd->add_option("name", ra.name, "exind|exind2|eg4|qi6x6|fraction")->required();
    repro_cmd->add_flag("--slow", ra.slow);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? kExitOk : kExitUsage;
    }

#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(threads);
#endif

    try {
        if (*moves_cmd) return run_moves(ma);
        if (*fiber_cmd) return run_fiber(fa);
        if (*sample_cmd) return run_sample(sa);
        if (*repro_cmd) return run_repro(ra);
    } catch (const CapExceeded& e) {
        std::cerr << "cap exceeded: " << e.what() << " (count so far: " << e.count_so_far
                  << ")\n";
        return kExitCap;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
