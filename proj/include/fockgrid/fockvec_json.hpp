#pragma once

#include <stdexcept>
#include <string>

#include "fockgrid/symtensor.hpp"

namespace fockgrid {

// Malformed or non-canonical chaos-vector JSON; the message names the
// offending location, e.g. "tensors[1].entries[3].index: not nondecreasing".
struct SchemaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Document layout:
//   {"grid": {"cells": d, "width": h, "origin": t0},
//    "tensors": [{"rank": n, "entries": [{"index": [i1 <= ... <= in],
//                                         "value": x}, ...]}, ...]}
// Omitted canonical indices are zero.  An empty tensors list denotes the
// vacuum vector (scalar component 1).
FockVector parse_fock_vector(const std::string& text);
std::string render_fock_vector(const FockVector& v);

FockVector read_fock_vector(const std::string& path);
void write_fock_vector(const FockVector& v, const std::string& path);

// Writes via a sibling temp file plus rename, so readers never observe a
// partially written file.  Throws std::runtime_error on I/O failure.
void atomic_write_text(const std::string& path, const std::string& content);

}  // namespace fockgrid
