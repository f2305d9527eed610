#pragma once

#include <memory>
#include <optional>
#include <string>

#include <json.hpp>

#include "pfpp/kernels.hpp"

namespace pfpp {

using Json = nlohmann::json;

// Quaternion <-> array of four complex numbers, each serialized as [re, im].
void to_json(Json& j, const Quaternion& q);
void from_json(const Json& j, Quaternion& q);

// QMatrix <-> {n, entries (row-major), adjointness, exceptional_row?}.
void to_json(Json& j, const QMatrix& m);
void from_json(const Json& j, QMatrix& m);

void to_json(Json& j, const GroundSet& g);
void from_json(const Json& j, GroundSet& g);

// GridKernel <-> {type: "grid", ground, table}.
void to_json(Json& j, const GridKernel& k);
void from_json(const Json& j, GridKernel& k);

// Parsed kernel configuration: exactly one of the two members is populated.
// Tabulated kernels carry their ground set; the analytic families need a
// separate grid to become tables.
struct KernelSpec {
    std::string type;
    std::shared_ptr<const Kernel> analytic;
    std::optional<GridKernel> grid;
};

// {type: "cse", order} | {type: "sine4"} | {type: "scalar"} |
// {type: "grid", ground, table}. Unknown types and fields are rejected.
KernelSpec parse_kernel_spec(const Json& j);

// {a, b, cells} (uniform cells on [a, b]) or {points, weights}.
GroundSet parse_grid_spec(const Json& j);

// Object schema guard: rejects non-objects, missing required keys, and any
// key outside required + optional.
void expect_fields(const Json& j, const std::string& what,
                   std::initializer_list<const char*> required,
                   std::initializer_list<const char*> optional = {});

double number_field(const Json& j, const std::string& what, const char* key);
int int_field(const Json& j, const std::string& what, const char* key);

// Stable hex digest of the table entries, used to stamp sample batches with
// the kernel they came from.
std::string table_fingerprint(const QMatrix& m);

Json load_json_file(const std::string& path);

}  // namespace pfpp
