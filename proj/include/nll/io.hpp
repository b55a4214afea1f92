// Copyright 2026 The nll Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
/**
 * @file
 * Direction-file parsing, JSON and CSV output.
 */

#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "error.hpp"
#include "kochen_specker.hpp"
#include "spin.hpp"

namespace nll {

using Json = nlohmann::ordered_json;

inline constexpr const char *kSchema = "nll-1";

/**
 * @brief Reads one direction per line as three whitespace-separated
 * components. Blank lines and text after '#' are ignored. Directions are
 * normalized.
 */
inline std::vector<Vec3> parse_directions(std::istream &in,
                                          const std::string &source = "input") {
    std::vector<Vec3> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        std::istringstream ss(line);
        Vec3 v{};
        std::size_t k = 0;
        std::string tok;
        while (ss >> tok) {
            if (k == 3) {
                fail(ErrorCode::BadInput, source + ":" + std::to_string(lineno) +
                                              ": more than three components");
            }
            std::size_t used = 0;
            try {
                v[k] = std::stod(tok, &used);
            } catch (const std::exception &) {
                used = 0;
            }
            if (used != tok.size() || !std::isfinite(v[k])) {
                fail(ErrorCode::BadInput, source + ":" + std::to_string(lineno) +
                                              ": bad number '" + tok + "'");
            }
            ++k;
        }
        if (k == 0) {
            continue;
        }
        if (k != 3) {
            fail(ErrorCode::BadInput, source + ":" + std::to_string(lineno) +
                                          ": expected three components");
        }
        if (norm(v) == 0.0) {
            fail(ErrorCode::BadInput,
                 source + ":" + std::to_string(lineno) + ": zero vector");
        }
        out.push_back(Direction(v).vec());
    }
    return out;
}

inline std::vector<Vec3> load_directions(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        fail(ErrorCode::BadInput, "cannot open " + path);
    }
    return parse_directions(in, path);
}

/// 17 significant digits; non-finite values become null.
inline std::string format17(double x) {
    if (!std::isfinite(x)) {
        return "null";
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace detail {

inline void dump17(const Json &j, std::string &out, int indent, int depth) {
    const auto pad = [&](int d) {
        if (indent >= 0) {
            out += '\n';
            out.append(static_cast<std::size_t>(indent * d), ' ');
        }
    };
    switch (j.type()) {
    case Json::value_t::object: {
        if (j.empty()) {
            out += "{}";
            return;
        }
        out += '{';
        bool first = true;
        for (const auto &[k, v] : j.items()) {
            if (!first) {
                out += ',';
            }
            first = false;
            pad(depth + 1);
            out += Json(k).dump();
            out += indent >= 0 ? ": " : ":";
            dump17(v, out, indent, depth + 1);
        }
        pad(depth);
        out += '}';
        return;
    }
    case Json::value_t::array: {
        if (j.empty()) {
            out += "[]";
            return;
        }
        out += '[';
        bool first = true;
        for (const auto &v : j) {
            if (!first) {
                out += ',';
            }
            first = false;
            pad(depth + 1);
            dump17(v, out, indent, depth + 1);
        }
        pad(depth);
        out += ']';
        return;
    }
    case Json::value_t::number_float:
        out += format17(j.get<double>());
        return;
    default:
        out += j.dump();
    }
}

} // namespace detail

/// JSON text with every float written to 17 significant digits.
inline std::string dump17(const Json &j, int indent = 2) {
    std::string out;
    detail::dump17(j, out, indent, 0);
    out += '\n';
    return out;
}

inline Json to_json(const Vec3 &v) { return Json::array({v[0], v[1], v[2]}); }

/**
 * @brief Checkable record of a coloring attempt: the directions, the
 * assignment (when one exists) and any violated triads or pairs.
 */
inline Json coloring_certificate(const TriadGraph &g, const ColoringResult &r) {
    Json j;
    j["schema"] = kSchema;
    Json dirs = Json::array();
    for (const auto &v : g.directions) {
        dirs.push_back(to_json(v));
    }
    j["directions"] = std::move(dirs);
    j["triads"] = g.triads.size();
    j["orthogonal_pairs"] = g.orthogonal_pairs.size();
    j["nodes"] = r.nodes;
    if (r.coloring) {
        j["status"] = "COLORED";
        j["values"] = *r.coloring;
        Json bad = Json::array();
        for (const auto &t : verify_coloring(g, *r.coloring)) {
            bad.push_back({t[0], t[1], t[2]});
        }
        for (const auto &p : verify_pair_rule(g, *r.coloring)) {
            bad.push_back({p.first, p.second});
        }
        j["violations"] = std::move(bad);
    } else {
        j["status"] = "UNCOLORABLE";
        j["values"] = nullptr;
        j["violations"] = Json::array();
    }
    return j;
}

/// Minimal CSV writer: header first, then rows of numbers or strings.
class CsvWriter {
  public:
    CsvWriter(std::ostream &out, const std::vector<std::string> &header)
        : out_(out), cols_(header.size()) {
        write_row(header);
    }

    void row(const std::vector<double> &values) {
        std::vector<std::string> s;
        s.reserve(values.size());
        for (double v : values) {
            s.push_back(format17(v));
        }
        write_row(s);
    }

    void write_row(const std::vector<std::string> &cells) {
        if (cells.size() != cols_) {
            fail(ErrorCode::BadInput, "CSV row width does not match header");
        }
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) {
                out_ << ',';
            }
            out_ << cells[i];
        }
        out_ << '\n';
    }

  private:
    std::ostream &out_;
    std::size_t cols_;
};

} // namespace nll
