#include "morl/dst.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace morl {

DstMap DstMap::load(std::istream& in) {
    DstMap map;
    std::string line;
    bool in_grid = false;
    int row = 0;
    bool start_seen = false;
    while (std::getline(in, line)) {
        const auto h = line.find('#');
        if (!in_grid && h != std::string::npos) line.erase(h);  // grid rows may contain '#'
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok)) continue;
        if (!in_grid) {
            if (tok == "rows") ls >> map.rows;
            else if (tok == "cols") ls >> map.cols;
            else if (tok == "max_steps") ls >> map.max_episode_steps;
            else if (tok == "grid") {
                if (map.rows <= 0 || map.cols <= 0)
                    throw std::invalid_argument("DstMap: rows/cols must precede grid");
                map.cells.assign(static_cast<std::size_t>(map.rows) * map.cols, Cell::Ocean);
                map.values.assign(map.cells.size(), 0.0);
                in_grid = true;
            } else {
                throw std::invalid_argument("DstMap: unknown key '" + tok + "'");
            }
            if (ls.fail()) throw std::invalid_argument("DstMap: bad value for '" + tok + "'");
        } else {
            if (row >= map.rows) throw std::invalid_argument("DstMap: too many grid rows");
            int col = 0;
            do {
                if (col >= map.cols) throw std::invalid_argument("DstMap: too many grid cols");
                const std::size_t idx = static_cast<std::size_t>(row) * map.cols + col;
                if (tok == ".") {
                    map.cells[idx] = Cell::Ocean;
                } else if (tok == "#") {
                    map.cells[idx] = Cell::Bottom;
                } else if (tok == "S") {
                    map.start_r = row;
                    map.start_c = col;
                    start_seen = true;
                } else if (tok.size() > 1 && tok[0] == 'T') {
                    map.cells[idx] = Cell::Treasure;
                    map.values[idx] = std::stod(tok.substr(1));
                } else {
                    throw std::invalid_argument("DstMap: bad cell token '" + tok + "'");
                }
                ++col;
            } while (ls >> tok);
            if (col != map.cols) throw std::invalid_argument("DstMap: short grid row");
            ++row;
        }
    }
    if (row != map.rows) throw std::invalid_argument("DstMap: missing grid rows");
    if (!start_seen) throw std::invalid_argument("DstMap: no start cell");
    return map;
}

DstMap DstMap::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("DstMap: cannot open " + path);
    return load(in);
}

void DstMap::save(std::ostream& out) const {
    out << "rows " << rows << "\ncols " << cols << "\nmax_steps " << max_episode_steps
        << "\ngrid\n";
    out.precision(12);
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            if (c) out << ' ';
            if (r == start_r && c == start_c) out << 'S';
            else if (at(r, c) == Cell::Bottom) out << '#';
            else if (at(r, c) == Cell::Treasure) out << 'T' << value_at(r, c);
            else out << '.';
        }
        out << '\n';
    }
}

DstEnv::DstEnv(DstMap map) : map_(std::move(map)) {
    if (map_.at(map_.start_r, map_.start_c) != DstMap::Cell::Ocean)
        throw std::invalid_argument("DstEnv: start cell must be ocean");
}

Vec DstEnv::observation() const {
    Vec o(static_cast<std::size_t>(obs_dim()), 0.0);
    o[static_cast<std::size_t>(r_) * map_.cols + c_] = 1.0;
    return o;
}

Vec DstEnv::reset(Rng&) {
    r_ = map_.start_r;
    c_ = map_.start_c;
    step_count_ = 0;
    terminal_ = false;
    return observation();
}

StepResult DstEnv::step(int action, Rng*) {
    if (action < 0 || action >= 4) throw std::invalid_argument("DstEnv: action out of range");
    if (terminal_) throw std::logic_error("DstEnv: step on terminal state");

    int nr = r_, nc = c_;
    switch (action) {
        case kLeft: --nc; break;
        case kRight: ++nc; break;
        case kUp: --nr; break;
        case kDown: ++nr; break;
    }
    // Moves into walls, sea bottom, or out of the map leave the position unchanged.
    if (nr >= 0 && nr < map_.rows && nc >= 0 && nc < map_.cols &&
        map_.at(nr, nc) != DstMap::Cell::Bottom) {
        r_ = nr;
        c_ = nc;
    }

    Vec reward = {0.0, -1.0};
    if (map_.at(r_, c_) == DstMap::Cell::Treasure) {
        reward[0] = map_.value_at(r_, c_);
        terminal_ = true;
    }
    if (++step_count_ >= map_.max_episode_steps) terminal_ = true;
    return {observation(), std::move(reward), terminal_};
}

}  // namespace morl
