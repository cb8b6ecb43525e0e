// Copyright 2026 The Polyrenorm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "polyrenorm/core.hpp"
#include "polyrenorm/polytope.hpp"
#include "polyrenorm/version.hpp"

namespace polyrenorm {

using OrderedJson = nlohmann::ordered_json;

struct RenormRow {
    int n = 0;
    double b = 0.0, c = 0.0, a = 0.0;
};

struct PartitionRow {
    int n = 0;
    int count = 0;
    double b_hat = 0.0;
    double analytic = 0.0;
    bool pass = false;
};

struct StarPieceRow {
    int n = 0;
    int size = 0;
    int net_size = 0;
    double eps_n = 0.0;
};

struct PolytopeSummary {
    std::string name;
    int dim = 0;
    int facets = 0;
    int vertices = 0;
    double eta = 0.0;
    bool sandwich_pass = false;
    std::vector<Coeffs> vertex_list;
};

/*!
 * The result payload of a run: parameter echo, the derived tables, every
 * check with its margin, and the environment stamp.  Reruns with the same
 * config and seed are byte-identical except for the timestamp field.
 */
struct ReportFile {
    OrderedJson params_echo;
    std::uint64_t seed = 0;
    OrderedJson claims = OrderedJson::object();   // e.g. {"i": true, "ii": true, "iii": true}
    OrderedJson margins = OrderedJson::object();  // worst margins backing the claims
    std::vector<RenormRow> renorm_table;
    std::vector<PartitionRow> partition_table;
    std::vector<StarPieceRow> star_pieces;
    std::vector<PolytopeSummary> polytopes;
    std::vector<CheckItem> checks;
    std::vector<std::string> notes;

    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }

    void add_check(const std::string& name, bool pass, double margin) {
        checks.push_back(CheckItem{name, pass, margin});
    }

    OrderedJson to_json(bool with_timestamp = true) const {
        OrderedJson j;
        j["version"] = kVersion;
        j["seed"] = seed;
        if (with_timestamp) {
            auto now = std::chrono::system_clock::now().time_since_epoch();
            j["timestamp"] =
                std::chrono::duration_cast<std::chrono::milliseconds>(now).count();
        }
        j["params"] = params_echo;
        j["claims"] = claims;
        j["margins"] = margins;
        OrderedJson table = OrderedJson::array();
        for (const auto& r : renorm_table)
            table.push_back(OrderedJson{{"n", r.n}, {"b", r.b}, {"c", r.c}, {"a", r.a}});
        j["renorm_table"] = table;
        OrderedJson part = OrderedJson::array();
        for (const auto& r : partition_table)
            part.push_back(OrderedJson{{"n", r.n},
                                       {"count", r.count},
                                       {"b_hat", r.b_hat},
                                       {"analytic_lower_bound", r.analytic},
                                       {"pass", r.pass}});
        j["partition_table"] = part;
        OrderedJson star = OrderedJson::array();
        for (const auto& r : star_pieces)
            star.push_back(OrderedJson{
                {"n", r.n}, {"size", r.size}, {"net_size", r.net_size}, {"eps_n", r.eps_n}});
        j["star_pieces"] = star;
        OrderedJson polys = OrderedJson::array();
        for (const auto& p : polytopes) {
            OrderedJson v = OrderedJson::array();
            for (const auto& vert : p.vertex_list) v.push_back(vert);
            polys.push_back(OrderedJson{{"name", p.name},
                                        {"dim", p.dim},
                                        {"facets", p.facets},
                                        {"vertices", p.vertices},
                                        {"sandwich", OrderedJson{{"eta", p.eta},
                                                                 {"pass", p.sandwich_pass}}},
                                        {"vertex_list", v}});
        }
        j["polytopes"] = polys;
        OrderedJson cs = OrderedJson::array();
        for (const auto& c : checks)
            cs.push_back(OrderedJson{{"name", c.name}, {"pass", c.pass}, {"margin", c.margin}});
        j["checks"] = cs;
        j["notes"] = notes;
        return j;
    }

    std::string renorm_csv() const {
        std::string out = "n,b_n,c_n,a_n\n";
        for (const auto& r : renorm_table)
            out += std::to_string(r.n) + "," + detail::format_double(r.b) + "," +
                   detail::format_double(r.c) + "," + detail::format_double(r.a) + "\n";
        return out;
    }

    std::string partition_csv() const {
        std::string out = "n,count,b_hat_n,analytic_lower_bound,pass\n";
        for (const auto& r : partition_table)
            out += std::to_string(r.n) + "," + std::to_string(r.count) + "," +
                   detail::format_double(r.b_hat) + "," + detail::format_double(r.analytic) +
                   "," + (r.pass ? "true" : "false") + "\n";
        return out;
    }

    std::string checks_csv() const {
        std::string out = "name,pass,margin\n";
        for (const auto& c : checks)
            out += c.name + "," + (c.pass ? "true" : "false") + "," +
                   detail::format_double(c.margin) + "\n";
        return out;
    }

    std::string vertices_csv() const {
        std::string out = "polytope,vertex\n";
        for (const auto& p : polytopes)
            for (const auto& v : p.vertex_list) {
                out += p.name + ",\"";
                for (std::size_t i = 0; i < v.size(); ++i)
                    out += (i ? " " : "") + detail::format_double(v[i]);
                out += "\"\n";
            }
        return out;
    }

    /// Writes report.json plus the CSV tables into a directory.
    void emit(const std::string& dir) const {
        namespace fs = std::filesystem;
        std::error_code ec;
        fs::create_directories(dir, ec);
        auto write = [&](const std::string& name, const std::string& content) {
            std::ofstream out(fs::path(dir) / name, std::ios::binary);
            if (!out) throw Error("unwritable path: " + (fs::path(dir) / name).string());
            out << content;
        };
        write("report.json", to_json().dump(2) + "\n");
        write("renorm.csv", renorm_csv());
        write("partition.csv", partition_csv());
        write("checks.csv", checks_csv());
        if (!polytopes.empty()) write("vertices.csv", vertices_csv());
    }
};

}  // namespace polyrenorm
