#include "fiberwalk/json_io.hpp"

#include <fstream>

namespace fiberwalk::io {

json table_to_json(const Table& t) {
    return json{{"rows", t.shape.rows}, {"cols", t.shape.cols}, {"counts", t.counts}};
}

Table table_from_json(const json& j) {
    Table t;
    t.shape = Shape{j.at("rows").get<int>(), j.at("cols").get<int>()};
    if (t.shape.rows < 1 || t.shape.cols < 1)
        throw std::invalid_argument("table: rows/cols must be positive");
    t.counts = j.at("counts").get<std::vector<Count>>();
    if (static_cast<int>(t.counts.size()) != t.shape.cell_count())
        throw std::invalid_argument("table: counts length != rows*cols");
    for (Count c : t.counts)
        if (c < 0) throw std::invalid_argument("table: negative count");
    return t;
}

json bounds_to_json(const BoundsGrid& b) {
    json arr = json::array();
    for (const auto& cb : b.bounds)
        arr.push_back(cb ? json(*cb) : json(nullptr));
    return arr;
}

BoundsGrid bounds_from_json(const json& j, Shape shape) {
    if (!j.is_array() || static_cast<int>(j.size()) != shape.cell_count())
        throw std::invalid_argument("bounds: expected array of rows*cols entries");
    BoundsGrid b = BoundsGrid::unbounded(shape);
    for (size_t h = 0; h < j.size(); ++h) {
        if (j[h].is_null()) continue;
        const Count v = j[h].get<Count>();
        if (v < 0) throw std::invalid_argument("bounds: negative bound");
        b.bounds[h] = v;
    }
    return b;
}

json design_to_json(const DesignMatrix& m) {
    json rows = json::array();
    for (int r = 0; r < m.s; ++r) {
        json row = json::array();
        for (int c = 0; c < m.k; ++c) row.push_back(m.at(r, c));
        rows.push_back(std::move(row));
    }
    return json{{"s", m.s}, {"k", m.k}, {"entries", std::move(rows)}};
}

DesignMatrix design_from_json(const json& j) {
    DesignMatrix m;
    m.s = j.at("s").get<int>();
    m.k = j.at("k").get<int>();
    if (m.s < 1 || m.k < 1) throw std::invalid_argument("design: s and k must be positive");
    const auto& rows = j.at("entries");
    if (static_cast<int>(rows.size()) != m.s)
        throw std::invalid_argument("design: entries row count != s");
    m.entries.reserve(static_cast<size_t>(m.s) * m.k);
    for (const auto& row : rows) {
        if (static_cast<int>(row.size()) != m.k)
            throw std::invalid_argument("design: entries column count != k");
        for (const auto& e : row) {
            const Count v = e.get<Count>();
            if (v < 0) throw std::invalid_argument("design: negative entry");
            m.entries.push_back(v);
        }
    }
    return m;
}

json move_to_json(const Move& m, const MoveSet& context) {
    json cells = json::array();
    if (context.rows > 0) {
        const Shape shape = context.shape();
        for (const auto& [h, v] : m.cells) {
            const auto [i, j] = shape.cell(h);
            cells.push_back(json::array({i + 1, j + 1, v}));
        }
    } else {
        for (const auto& [h, v] : m.cells) cells.push_back(json::array({h + 1, v}));
    }
    return json{{"cells", std::move(cells)}};
}

json moveset_to_json(const MoveSet& ms) {
    json out;
    if (ms.rows > 0) {
        out["rows"] = ms.rows;
        out["cols"] = ms.cols;
    } else {
        out["k"] = ms.cell_count;
    }
    json moves = json::array();
    for (const auto& m : ms.moves) moves.push_back(move_to_json(m, ms));
    out["moves"] = std::move(moves);
    return out;
}

MoveSet moveset_from_json(const json& j) {
    MoveSet ms;
    if (j.contains("rows")) {
        ms.rows = j.at("rows").get<int>();
        ms.cols = j.at("cols").get<int>();
        ms.cell_count = ms.rows * ms.cols;
    } else {
        ms.cell_count = j.at("k").get<int>();
    }
    for (const auto& jm : j.at("moves")) {
        std::vector<std::pair<int, Count>> deltas;
        for (const auto& c : jm.at("cells")) {
            if (ms.rows > 0) {
                const int i = c.at(0).get<int>() - 1, jj = c.at(1).get<int>() - 1;
                if (i < 0 || i >= ms.rows || jj < 0 || jj >= ms.cols)
                    throw std::invalid_argument("moveset: cell out of range");
                deltas.emplace_back(ms.shape().index(i, jj), c.at(2).get<Count>());
            } else {
                const int h = c.at(0).get<int>() - 1;
                if (h < 0 || h >= ms.cell_count)
                    throw std::invalid_argument("moveset: cell out of range");
                deltas.emplace_back(h, c.at(1).get<Count>());
            }
        }
        ms.moves.push_back(make_move(deltas));
    }
    return ms;
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    json j;
    in >> j;
    return j;
}

void write_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump(2) << '\n';
}

}  // namespace fiberwalk::io
