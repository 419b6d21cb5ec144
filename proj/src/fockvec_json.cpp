#include "fockgrid/fockvec_json.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "json.hpp"

namespace fockgrid {

namespace {

using nlohmann::json;

double require_number(const json& j, const std::string& where) {
  if (!j.is_number()) throw SchemaError(where + ": expected a number");
  return j.get<double>();
}

long long require_int(const json& j, const std::string& where) {
  if (!j.is_number_integer()) throw SchemaError(where + ": expected an integer");
  return j.get<long long>();
}

const json& require_key(const json& j, const char* key, const std::string& where) {
  if (!j.is_object()) throw SchemaError(where + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw SchemaError(where + ": missing key \"" + key + "\"");
  return *it;
}

}  // namespace

FockVector parse_fock_vector(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("document: ") + e.what());
  }

  const json& jg = require_key(doc, "grid", "document");
  const long long cells = require_int(require_key(jg, "cells", "grid"), "grid.cells");
  const double width = require_number(require_key(jg, "width", "grid"), "grid.width");
  const double origin = require_number(require_key(jg, "origin", "grid"), "grid.origin");
  GridModel grid;
  try {
    grid = make_grid(static_cast<int>(cells), width, origin);
  } catch (const std::invalid_argument& e) {
    throw SchemaError(std::string("grid: ") + e.what());
  }

  const json& jt = require_key(doc, "tensors", "document");
  if (!jt.is_array()) throw SchemaError("tensors: expected an array");
  if (jt.empty()) return FockVector::vacuum(grid, 0);

  int max_rank = 0;
  std::vector<std::pair<int, std::size_t>> seen;  // (rank, tensor position)
  for (std::size_t ti = 0; ti < jt.size(); ++ti) {
    const std::string twhere = "tensors[" + std::to_string(ti) + "]";
    const long long r = require_int(require_key(jt[ti], "rank", twhere), twhere + ".rank");
    if (r < 0) throw SchemaError(twhere + ".rank: negative");
    for (const auto& [rank, pos] : seen)
      if (rank == r) throw SchemaError(twhere + ".rank: duplicate of tensors[" +
                                       std::to_string(pos) + "]");
    seen.emplace_back(static_cast<int>(r), ti);
    max_rank = std::max(max_rank, static_cast<int>(r));
  }

  FockVector v(grid, max_rank);
  for (std::size_t ti = 0; ti < jt.size(); ++ti) {
    const std::string twhere = "tensors[" + std::to_string(ti) + "]";
    const int rank = static_cast<int>(jt[ti]["rank"].get<long long>());
    SymTensor t(grid, rank);
    const json& je = require_key(jt[ti], "entries", twhere);
    if (!je.is_array()) throw SchemaError(twhere + ".entries: expected an array");
    std::vector<bool> used(t.size(), false);
    for (std::size_t ei = 0; ei < je.size(); ++ei) {
      const std::string ewhere = twhere + ".entries[" + std::to_string(ei) + "]";
      const json& ji = require_key(je[ei], "index", ewhere);
      if (!ji.is_array()) throw SchemaError(ewhere + ".index: expected an array");
      if (static_cast<int>(ji.size()) != rank)
        throw SchemaError(ewhere + ".index: length " + std::to_string(ji.size()) +
                          " does not match rank " + std::to_string(rank));
      MultiIndex idx(ji.size());
      for (std::size_t k = 0; k < ji.size(); ++k) {
        const long long c = require_int(ji[k], ewhere + ".index[" + std::to_string(k) + "]");
        if (c < 0 || c >= grid.cells)
          throw SchemaError(ewhere + ".index[" + std::to_string(k) + "]: cell " +
                            std::to_string(c) + " outside [0, " + std::to_string(grid.cells) +
                            ")");
        idx[k] = static_cast<int>(c);
        if (k > 0 && idx[k] < idx[k - 1])
          throw SchemaError(ewhere + ".index: not nondecreasing");
      }
      const std::size_t ord = rank == 0 ? 0 : multiset_ordinal(grid.cells, idx);
      if (used[ord]) throw SchemaError(ewhere + ".index: duplicate canonical index");
      used[ord] = true;
      t[ord] = require_number(require_key(je[ei], "value", ewhere), ewhere + ".value");
    }
    v.set_component(t);
  }
  return v;
}

std::string render_fock_vector(const FockVector& v) {
  json doc;
  doc["grid"] = {{"cells", v.grid().cells}, {"width", v.grid().width},
                 {"origin", v.grid().origin}};
  json tensors = json::array();
  for (int n = 0; n <= v.max_rank(); ++n) {
    const SymTensor& t = v.component(n);
    json entries = json::array();
    std::size_t ord = 0;
    for_each_multiset(v.grid().cells, n, [&](const MultiIndex& idx) {
      if (t[ord] != 0.0) {
        json e;
        e["index"] = idx;
        e["value"] = t[ord];
        entries.push_back(std::move(e));
      }
      ++ord;
    });
    // rank 0 is always written so an all-zero vector survives a round trip
    if (!entries.empty() || n == 0) {
      if (n == 0 && entries.empty())
        entries.push_back(json{{"index", json::array()}, {"value", 0.0}});
      tensors.push_back(json{{"rank", n}, {"entries", std::move(entries)}});
    }
  }
  doc["tensors"] = std::move(tensors);
  return doc.dump(2) + "\n";
}

FockVector read_fock_vector(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw std::runtime_error("read failure: " + path);
  return parse_fock_vector(buf.str());
}

void write_fock_vector(const FockVector& v, const std::string& path) {
  atomic_write_text(path, render_fock_vector(v));
}

void atomic_write_text(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + tmp);
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failure: " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw std::runtime_error("cannot rename " + tmp + " to " + path);
  }
}

}  // namespace fockgrid
