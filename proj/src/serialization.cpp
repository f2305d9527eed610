#include "pfpp/serialization.hpp"

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "pfpp/errors.hpp"

namespace pfpp {

namespace {

Json complex_to_json(const Complex& z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json& j, const std::string& what) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw SchemaError(what + ": a complex number must be a [re, im] pair");
    return Complex(j[0].get<double>(), j[1].get<double>());
}

std::string adjointness_name(Adjointness a) {
    switch (a) {
        case Adjointness::SelfAdjoint: return "self_adjoint";
        case Adjointness::AlmostSelfAdjoint: return "almost_self_adjoint";
        default: return "general";
    }
}

Adjointness adjointness_from_name(const std::string& s) {
    if (s == "self_adjoint") return Adjointness::SelfAdjoint;
    if (s == "almost_self_adjoint") return Adjointness::AlmostSelfAdjoint;
    if (s == "general") return Adjointness::General;
    throw SchemaError("unknown adjointness \"" + s + "\"");
}

std::vector<double> real_vector(const Json& j, const std::string& what) {
    if (!j.is_array()) throw SchemaError(what + " must be an array of numbers");
    std::vector<double> v;
    v.reserve(j.size());
    for (const auto& e : j) {
        if (!e.is_number()) throw SchemaError(what + " must contain only numbers");
        v.push_back(e.get<double>());
    }
    return v;
}

}  // namespace

void expect_fields(const Json& j, const std::string& what,
                   std::initializer_list<const char*> required,
                   std::initializer_list<const char*> optional) {
    if (!j.is_object()) throw SchemaError(what + " must be a JSON object");
    for (const char* key : required)
        if (!j.contains(key)) throw SchemaError(what + ": missing field \"" + key + "\"");
    for (const auto& item : j.items()) {
        bool known = false;
        for (const char* key : required) known = known || item.key() == key;
        for (const char* key : optional) known = known || item.key() == key;
        if (!known) throw SchemaError(what + ": unknown field \"" + item.key() + "\"");
    }
}

double number_field(const Json& j, const std::string& what, const char* key) {
    if (!j.at(key).is_number())
        throw SchemaError(what + ": field \"" + key + "\" must be a number");
    return j.at(key).get<double>();
}

int int_field(const Json& j, const std::string& what, const char* key) {
    if (!j.at(key).is_number_integer())
        throw SchemaError(what + ": field \"" + key + "\" must be an integer");
    return j.at(key).get<int>();
}

void to_json(Json& j, const Quaternion& q) {
    j = Json::array({complex_to_json(q.q0), complex_to_json(q.q1), complex_to_json(q.q2),
                     complex_to_json(q.q3)});
}

void from_json(const Json& j, Quaternion& q) {
    if (!j.is_array() || j.size() != 4)
        throw SchemaError("a quaternion must be an array of four complex numbers");
    q.q0 = complex_from_json(j[0], "quaternion");
    q.q1 = complex_from_json(j[1], "quaternion");
    q.q2 = complex_from_json(j[2], "quaternion");
    q.q3 = complex_from_json(j[3], "quaternion");
}

void to_json(Json& j, const QMatrix& m) {
    Json entries = Json::array();
    for (int i = 0; i < m.size(); ++i)
        for (int k = 0; k < m.size(); ++k) entries.push_back(Json(m(i, k)));
    j = Json{{"n", m.size()},
             {"entries", std::move(entries)},
             {"adjointness", adjointness_name(m.declared_adjointness())}};
    if (m.declared_adjointness() == Adjointness::AlmostSelfAdjoint)
        j["exceptional_row"] = m.declared_exceptional_row();
}

void from_json(const Json& j, QMatrix& m) {
    expect_fields(j, "matrix", {"n", "entries", "adjointness"}, {"exceptional_row"});
    const int n = int_field(j, "matrix", "n");
    if (n < 0) throw SchemaError("matrix: n must be nonnegative");
    const Json& entries = j.at("entries");
    if (!entries.is_array() || entries.size() != static_cast<size_t>(n) * n)
        throw SchemaError("matrix: entries must hold n*n quaternions in row-major order");
    m = QMatrix(n);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k)
            m(i, k) = entries[static_cast<size_t>(i) * n + k].get<Quaternion>();
    const Adjointness adj = adjointness_from_name(j.at("adjointness").get<std::string>());
    int row = -1;
    if (adj == Adjointness::AlmostSelfAdjoint) {
        if (!j.contains("exceptional_row"))
            throw SchemaError("matrix: almost_self_adjoint requires exceptional_row");
        row = int_field(j, "matrix", "exceptional_row");
        if (row < 0 || row >= n) throw SchemaError("matrix: exceptional_row out of range");
    }
    m.declare_adjointness(adj, row);
}

void to_json(Json& j, const GroundSet& g) {
    j = Json{{"points", g.points}, {"weights", g.weights}};
}

void from_json(const Json& j, GroundSet& g) {
    expect_fields(j, "ground set", {"points", "weights"});
    g.points = real_vector(j.at("points"), "ground set points");
    g.weights = real_vector(j.at("weights"), "ground set weights");
    g.validate();
}

void to_json(Json& j, const GridKernel& k) {
    j = Json{{"type", "grid"}, {"ground", k.ground()}, {"table", k.table()}};
}

void from_json(const Json& j, GridKernel& k) {
    expect_fields(j, "grid kernel", {"type", "ground", "table"});
    if (j.at("type") != "grid") throw SchemaError("grid kernel: type must be \"grid\"");
    k = GridKernel(j.at("ground").get<GroundSet>(), j.at("table").get<QMatrix>());
}

KernelSpec parse_kernel_spec(const Json& j) {
    if (!j.is_object() || !j.contains("type") || !j.at("type").is_string())
        throw SchemaError("kernel spec must be an object with a string \"type\"");
    const std::string type = j.at("type").get<std::string>();
    KernelSpec spec;
    spec.type = type;
    if (type == "cse") {
        expect_fields(j, "cse kernel", {"type", "order"});
        const int order = int_field(j, "cse kernel", "order");
        if (order < 1) throw SchemaError("cse kernel: order must be positive");
        spec.analytic = std::make_shared<CseKernel>(order);
    } else if (type == "sine4") {
        expect_fields(j, "sine4 kernel", {"type"});
        spec.analytic = std::make_shared<Sine4Kernel>();
    } else if (type == "scalar") {
        expect_fields(j, "scalar kernel", {"type"});
        spec.analytic = make_scalar_sine_kernel();
    } else if (type == "grid") {
        spec.grid = j.get<GridKernel>();
    } else {
        throw SchemaError("unknown kernel type \"" + type + "\"");
    }
    return spec;
}

GroundSet parse_grid_spec(const Json& j) {
    if (!j.is_object()) throw SchemaError("grid spec must be a JSON object");
    if (j.contains("cells")) {
        expect_fields(j, "grid spec", {"a", "b", "cells"});
        return GroundSet::uniform(number_field(j, "grid spec", "a"),
                                  number_field(j, "grid spec", "b"),
                                  int_field(j, "grid spec", "cells"));
    }
    return j.get<GroundSet>();
}

std::string table_fingerprint(const QMatrix& m) {
    // FNV-1a over the raw component doubles, row-major.
    uint64_t h = 1469598103934665603ull;
    auto mix = [&h](double x) {
        uint64_t bits;
        static_assert(sizeof(bits) == sizeof(x));
        std::memcpy(&bits, &x, sizeof(bits));
        for (int b = 0; b < 8; ++b) {
            h ^= (bits >> (8 * b)) & 0xffu;
            h *= 1099511628211ull;
        }
    };
    for (int i = 0; i < m.size(); ++i)
        for (int k = 0; k < m.size(); ++k) {
            const Quaternion& q = m(i, k);
            for (const Complex* c : {&q.q0, &q.q1, &q.q2, &q.q3}) {
                mix(c->real());
                mix(c->imag());
            }
        }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open \"" + path + "\"");
    Json j;
    try {
        in >> j;
    } catch (const Json::parse_error& e) {
        throw SchemaError("invalid JSON in \"" + path + "\": " + e.what());
    }
    return j;
}

}  // namespace pfpp
