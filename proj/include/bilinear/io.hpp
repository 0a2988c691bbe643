#pragma once

// JSON interchange.
//
// Tensor file:  {"name": "...", "dims": [n1, n2, n3], "values": [...]}
//               values row-major t[i][j][k], k fastest.
// Triples file: {"triples": [{"tau": t, "x": [...], "y": [...], "z": [...]}]}
//
// Reports are written with every floating-point number at 17 significant
// digits so that output is byte-stable and lossless.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "bilinear/schmidt.hpp"
#include "bilinear/schur.hpp"
#include "bilinear/spectra.hpp"
#include "bilinear/tensor.hpp"

namespace bilinear::io {

using Json = nlohmann::ordered_json;

/// Malformed or inconsistent input data.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::vector<double> numbers(const Json& j, const char* what) {
    if (!j.is_array())
        throw InputError(std::string(what) + ": expected an array of numbers");
    std::vector<double> out;
    out.reserve(j.size());
    for (const auto& e : j) {
        if (!e.is_number())
            throw InputError(std::string(what) + ": expected an array of numbers");
        const double v = e.get<double>();
        if (!std::isfinite(v))
            throw InputError(std::string(what) + ": non-finite value");
        out.push_back(v);
    }
    return out;
}

template <Space S>
Vec<S> vector_field(const Json& obj, const char* key, std::size_t expected) {
    if (!obj.contains(key))
        throw InputError(std::string("triple: missing \"") + key + "\"");
    auto v = numbers(obj.at(key), key);
    if (v.size() != expected)
        throw InputError(std::string("triple: \"") + key + "\" has length " +
                         std::to_string(v.size()) + ", expected " + std::to_string(expected));
    return Vec<S>(std::move(v));
}

inline Json parse_text(const std::string& text, const std::string& origin) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw InputError(origin + ": invalid JSON: " + e.what());
    }
}

inline void write_number(std::string& out, double v) {
    if (!std::isfinite(v)) {
        out += "null";
        return;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out += buf;
}

inline void write(std::string& out, const Json& j, int indent, int depth) {
    const auto newline = [&](int level) {
        if (indent < 0)
            return;
        out += '\n';
        out.append(std::size_t(indent * level), ' ');
    };
    switch (j.type()) {
        case Json::value_t::number_float:
            write_number(out, j.get<double>());
            return;
        case Json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += '{';
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first)
                    out += ',';
                first = false;
                newline(depth + 1);
                out += Json(it.key()).dump();
                out += indent < 0 ? ":" : ": ";
                write(out, it.value(), indent, depth + 1);
            }
            newline(depth);
            out += '}';
            return;
        }
        case Json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            // Arrays of scalars stay on one line.
            const bool flat = std::none_of(j.begin(), j.end(), [](const Json& e) { return e.is_structured(); });
            out += '[';
            bool first = true;
            for (const auto& e : j) {
                if (!first)
                    out += flat && indent >= 0 ? ", " : ",";
                first = false;
                if (!flat)
                    newline(depth + 1);
                write(out, e, indent, depth + 1);
            }
            if (!flat)
                newline(depth);
            out += ']';
            return;
        }
        default:
            out += j.dump();
    }
}

}  // namespace detail

/// Serializes with 17 significant digits for every floating-point value.
inline std::string dump(const Json& j, int indent = 2) {
    std::string out;
    detail::write(out, j, indent, 0);
    return out;
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw InputError(path + ": cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline Tensor3 tensor_from_json(const Json& j) {
    if (!j.is_object())
        throw InputError("tensor: expected a JSON object");
    if (!j.contains("dims") || !j.contains("values"))
        throw InputError("tensor: \"dims\" and \"values\" are required");
    const auto& dj = j.at("dims");
    if (!dj.is_array() || dj.size() != 3)
        throw InputError("tensor: \"dims\" must be an array of three positive integers");
    std::array<std::size_t, 3> dims{};
    for (std::size_t m = 0; m < 3; ++m) {
        if (!dj[m].is_number_integer() || dj[m].get<long long>() <= 0)
            throw InputError("tensor: \"dims\" must be an array of three positive integers");
        dims[m] = dj[m].get<std::size_t>();
    }
    auto values = detail::numbers(j.at("values"), "tensor values");
    std::optional<std::string> name;
    if (j.contains("name") && !j.at("name").is_null()) {
        if (!j.at("name").is_string())
            throw InputError("tensor: \"name\" must be a string");
        name = j.at("name").get<std::string>();
    }
    try {
        return Tensor3({dims[0], dims[1], dims[2]}, std::move(values), std::move(name));
    } catch (const std::invalid_argument& e) {
        throw InputError(e.what());
    }
}

inline Tensor3 parse_tensor(const std::string& text, const std::string& origin = "tensor") {
    return tensor_from_json(detail::parse_text(text, origin));
}

inline Tensor3 read_tensor_file(const std::string& path) {
    return parse_tensor(read_text_file(path), path);
}

inline Json to_json(const Tensor3& t) {
    Json j;
    if (t.name())
        j["name"] = *t.name();
    j["dims"] = {t.dims().n1, t.dims().n2, t.dims().n3};
    j["values"] = std::vector<double>(t.values().begin(), t.values().end());
    return j;
}

template <Space S>
Json to_json(const Vec<S>& v) {
    return Json(v.values());
}

/// Triples from a {"triples": [...]} document, checked against dims.
/// Residuals are computed against t.
inline std::vector<SingularTriple> triples_from_json(const Json& j, const Tensor3& t) {
    if (!j.is_object() || !j.contains("triples") || !j.at("triples").is_array())
        throw InputError("triples: expected {\"triples\": [...]}");
    const auto& d = t.dims();
    std::vector<SingularTriple> out;
    for (const auto& e : j.at("triples")) {
        if (!e.is_object() || !e.contains("tau") || !e.at("tau").is_number())
            throw InputError("triple: \"tau\" must be a number");
        const double tau = e.at("tau").get<double>();
        if (!std::isfinite(tau))
            throw InputError("triple: \"tau\" must be finite");
        out.push_back(make_triple(t, tau, detail::vector_field<Space::H1>(e, "x", d.n1),
                                  detail::vector_field<Space::H2>(e, "y", d.n2),
                                  detail::vector_field<Space::K>(e, "z", d.n3)));
    }
    return out;
}

inline std::vector<SingularTriple> read_triples_file(const std::string& path, const Tensor3& t) {
    return triples_from_json(detail::parse_text(read_text_file(path), path), t);
}

inline Json to_json(const SingularTriple& s) {
    Json j;
    j["tau"] = s.tau;
    j["x"] = to_json(s.x);
    j["y"] = to_json(s.y);
    j["z"] = to_json(s.z);
    j["residuals"] = s.residuals;
    return j;
}

inline Json to_json(const OrderedCheck& c) {
    Json j;
    j["ordered"] = c.ordered;
    j["slice_residuals"] = c.slice_residuals;
    j["transposed_residual"] = c.transposed_residual;
    return j;
}

inline Json to_json(const SchmidtRepresentation& rep) {
    Json j;
    j["status"] = to_string(rep.status);
    j["dims"] = {rep.dims.n1, rep.dims.n2, rep.dims.n3};
    j["reconstruction_residual"] = rep.reconstruction_residual;
    Json terms = Json::array();
    for (const auto& term : rep.terms) {
        Json e;
        e["tau"] = term.tau;
        e["x"] = to_json(term.x);
        e["y"] = to_json(term.y);
        e["z"] = to_json(term.z);
        terms.push_back(std::move(e));
    }
    j["terms"] = std::move(terms);
    return j;
}

inline SchmidtRepresentation representation_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("dims") || !j.contains("terms") || !j.contains("status"))
        throw InputError("representation: \"dims\", \"terms\" and \"status\" are required");
    const auto dv = j.at("dims").get<std::vector<std::size_t>>();
    if (dv.size() != 3)
        throw InputError("representation: \"dims\" must have three entries");
    SchmidtRepresentation rep;
    rep.dims = {dv[0], dv[1], dv[2]};
    const auto status = j.at("status").get<std::string>();
    if (status != "Complete" && status != "Failed")
        throw InputError("representation: unknown status " + status);
    rep.status = status == "Complete" ? SchmidtStatus::Complete : SchmidtStatus::Failed;
    if (j.contains("reconstruction_residual") && j.at("reconstruction_residual").is_number())
        rep.reconstruction_residual = j.at("reconstruction_residual").get<double>();
    for (const auto& e : j.at("terms")) {
        if (!e.is_object() || !e.contains("tau") || !e.at("tau").is_number())
            throw InputError("term: \"tau\" must be a number");
        rep.terms.push_back({e.at("tau").get<double>(),
                             detail::vector_field<Space::H1>(e, "x", rep.dims.n1),
                             detail::vector_field<Space::H2>(e, "y", rep.dims.n2),
                             detail::vector_field<Space::K>(e, "z", rep.dims.n3)});
    }
    return rep;
}

inline Json to_json(const SchurRepresentation& s) {
    Json j;
    j["dim"] = s.dim;
    Json terms = Json::array();
    for (const auto& term : s.terms) {
        Json e;
        e["lambda"] = term.lambda;
        e["x"] = to_json(term.x);
        terms.push_back(std::move(e));
    }
    j["terms"] = std::move(terms);
    return j;
}

}  // namespace bilinear::io
