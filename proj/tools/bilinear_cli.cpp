// bilinear_cli: norms, spectra and Schmidt/Schur representations of
// bilinear operators given as 3-tensors in JSON.
//
//   bilinear_cli norm FILE
//   bilinear_cli spectrum FILE
//   bilinear_cli schmidt FILE
//   bilinear_cli schur FILE
//   bilinear_cli verify FILE TRIPLES
//
// Exit codes: 0 success, 2 input error, 3 Schmidt failure, 4 Schur
// precondition failure.

#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "bilinear/bilinear.hpp"
#include "bilinear/oracle.hpp"

using namespace bilinear;
using io::Json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitSchmidt = 3;
constexpr int kExitSchur = 4;

struct Options {
    std::string tensor_path;
    std::string triples_path;
    SearchConfig cfg;
    bool json = false;
};

struct Outcome {
    std::string status = "Ok";
    int code = kExitOk;
    Json result = Json::object();
    std::string human;
};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

std::string tau_str(double v) { return fmt("%.12f", v); }

template <Space S>
std::string vec_str(const Vec<S>& v) {
    std::string out = "(";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i)
            out += ", ";
        out += fmt("%.6f", std::abs(v[i]) < 5e-7 ? 0.0 : v[i]);
    }
    return out + ")";
}

std::string triple_str(const SingularTriple& s) {
    return "tau = " + tau_str(s.tau) + "\n    x = " + vec_str(s.x) + "\n    y = " + vec_str(s.y) +
           "\n    z = " + vec_str(s.z) + "\n";
}

double scaled_tol(const Tensor3& t, const SearchConfig& cfg) {
    return cfg.residual_tol * (1.0 + hs_norm(t));
}

Json config_json(const Tensor3& t, const SearchConfig& cfg) {
    Json j;
    j["starts"] = cfg.resolved_starts(t.dims());
    j["max_iter"] = cfg.max_iter;
    j["iter_tol"] = cfg.iter_tol;
    j["residual_tol"] = cfg.residual_tol;
    j["dedup_tol"] = cfg.dedup_tol;
    j["seed"] = cfg.seed;
    return j;
}

Outcome run_norm(const Tensor3& t, const Options& o) {
    Outcome out;
    const auto n = operator_norm(t, o.cfg);
    const double hs = hs_norm(t);
    out.result["bilinear_norm"] = n.value;
    out.result["hs_norm"] = hs;
    out.result["argmax"] = n.argmax ? io::to_json(*n.argmax) : Json(nullptr);
    out.human = "bilinear_norm: " + tau_str(n.value) + ", hs_norm: " + tau_str(hs) + "\n";
    if (n.argmax)
        out.human += "attained at\n    x = " + vec_str(n.argmax->x) + "\n    y = " + vec_str(n.argmax->y) +
                     "\n    z = " + vec_str(n.argmax->z) + "\n";
    return out;
}

Outcome run_spectrum(const Tensor3& t, const Options& o) {
    Outcome out;
    const double tol = scaled_tol(t, o.cfg);
    const auto spec = enumerate_triples(t, o.cfg);

    Json triples = Json::array();
    Json values = Json::array();
    std::string body;
    for (std::size_t i = 0; i < spec.triples.size();) {
        std::size_t hi = i;
        bool any_ordered = false;
        std::string group;
        const double tau = spec.triples[i].tau;
        while (hi < spec.triples.size() &&
               std::abs(spec.triples[hi].tau - tau) <= o.cfg.dedup_tol * (1.0 + tau)) {
            const auto& s = spec.triples[hi];
            const auto check = is_ordered(t, s, tol);
            any_ordered = any_ordered || check.ordered;
            Json e = io::to_json(s);
            e["ordered"] = io::to_json(check);
            triples.push_back(std::move(e));
            group += "  " + triple_str(s) + "    ordered: " + (check.ordered ? "yes" : "no") +
                     " (max slice residual " + fmt("%.3e", check.max_residual()) + ")\n";
            ++hi;
        }
        Json v;
        v["tau"] = tau;
        v["ordered"] = any_ordered;
        v["orbits"] = hi - i;
        values.push_back(std::move(v));
        body += "tau " + tau_str(tau) + "  ordered: " + (any_ordered ? "yes" : "no") +
                "  sign orbits: " + std::to_string(hi - i) + "\n" + group;
        i = hi;
    }
    out.result["complete"] = spec.complete;
    out.result["values"] = std::move(values);
    out.result["triples"] = std::move(triples);
    out.human = std::to_string(out.result["values"].size()) + " singular value(s), " +
                std::to_string(spec.triples.size()) + " triple(s) up to sign\n" + body;
    return out;
}

Json steps_json(const DeflationReport& report) {
    Json steps = Json::array();
    for (const auto& s : report.steps) {
        Json e;
        e["index"] = s.index;
        e["triple"] = io::to_json(s.triple);
        e["ordered"] = io::to_json(s.ordered);
        e["ordered_original"] = io::to_json(s.ordered_original);
        e["transfer_residuals"] = s.transfer_residuals;
        e["remaining_hs"] = s.remaining_hs;
        steps.push_back(std::move(e));
    }
    return steps;
}

Json failure_json(const DeflationFailure& f) {
    Json j;
    j["step"] = f.step;
    j["reason"] = to_string(f.reason);
    j["diagnostics"] = f.diagnostics;
    j["triple"] = f.triple ? io::to_json(*f.triple) : Json(nullptr);
    j["ordered"] = f.ordered ? io::to_json(*f.ordered) : Json(nullptr);
    return j;
}

Json check_json(const RepresentationCheck& c) {
    Json j;
    j["passed"] = c.passed();
    j["monotone"] = c.monotone;
    j["orthonormality_error"] = c.orthonormality_error;
    j["residual"] = c.residual;
    j["value_error"] = c.value_error;
    return j;
}

std::string schmidt_human(const SchmidtResult& r) {
    const auto& rep = r.representation;
    std::string s = std::string("status: ") + to_string(rep.status) + "\n";
    if (rep.status == SchmidtStatus::Failed) {
        const auto& f = *r.report.failure;
        s += std::string("failed at step ") + std::to_string(f.step) + ": " + to_string(f.reason) + " (" +
             f.diagnostics + ")\n";
        if (f.triple)
            s += "  " + triple_str(*f.triple);
        if (f.ordered)
            s += "    max slice residual " + fmt("%.3e", f.ordered->max_residual()) + "\n";
        return s;
    }
    s += std::to_string(rep.terms.size()) + " term(s), reconstruction residual " +
         fmt("%.3e", rep.reconstruction_residual) + "\n";
    for (const auto& term : rep.terms)
        s += "  tau = " + tau_str(term.tau) + "\n    x = " + vec_str(term.x) + "\n    y = " +
             vec_str(term.y) + "\n    z = " + vec_str(term.z) + "\n";
    return s;
}

Outcome run_schmidt(const Tensor3& t, const Options& o) {
    Outcome out;
    const auto r = schmidt_decompose(t, o.cfg);
    const auto& rep = r.representation;
    out.result["representation"] = io::to_json(rep);
    out.result["tolerance"] = r.report.tolerance;
    out.result["steps"] = steps_json(r.report);
    out.result["failure"] = r.report.failure ? failure_json(*r.report.failure) : Json(nullptr);
    out.human = schmidt_human(r);
    if (rep.status == SchmidtStatus::Failed) {
        out.status = "Failed";
        out.code = kExitSchmidt;
        out.result["check"] = nullptr;
        return out;
    }
    const auto check = verify_representation(t, rep, r.report.tolerance);
    out.result["check"] = check_json(check);
    if (!check.passed()) {
        out.status = "Failed";
        out.code = kExitSchmidt;
        out.human += "representation does not verify\n";
    }
    return out;
}

Outcome run_schur(const Tensor3& t, const Options& o) {
    Outcome out;
    const auto& d = t.dims();
    const double tol = scaled_tol(t, o.cfg);
    auto precondition = [&](const std::string& why) {
        out.status = "Failed";
        out.code = kExitSchur;
        out.result["precondition"] = why;
        out.human = "schur: " + why + "\n";
        return out;
    };
    if (!(d.n1 == d.n2 && d.n2 == d.n3))
        return precondition("dimensions differ; a Schur representation needs one space");
    if (!is_symmetric(t, tol))
        return precondition("operator is not symmetric");
    if (!is_self_adjoint(t, tol))
        return precondition("operator is not self-adjoint");
    out.result["precondition"] = nullptr;

    const auto r = schmidt_decompose(t, o.cfg);
    out.result["schmidt"] = io::to_json(r.representation);
    if (r.representation.status == SchmidtStatus::Failed) {
        out.status = "Failed";
        out.code = kExitSchmidt;
        out.result["failure"] = failure_json(*r.report.failure);
        out.human = schmidt_human(r);
        return out;
    }
    SchurRepresentation schur;
    try {
        schur = schur_from_schmidt(t, r.representation, r.report.tolerance);
    } catch (const InconsistencyError& e) {
        out.status = "Failed";
        out.code = kExitSchmidt;
        out.result["failure"] = e.what();
        out.human = std::string("schur: ") + e.what() + "\n";
        return out;
    }
    const auto check = verify_schur(t, schur, r.report.tolerance);
    out.result["schur"] = io::to_json(schur);
    Json c;
    c["passed"] = check.passed();
    c["residual"] = check.residual;
    c["orthonormality_error"] = check.orthonormality_error;
    c["monotone"] = check.monotone;
    out.result["check"] = std::move(c);
    out.human = std::to_string(schur.terms.size()) + " term(s), reconstruction residual " +
                fmt("%.3e", check.residual) + (check.passed() ? " (pass)\n" : " (FAIL)\n");
    for (const auto& term : schur.terms)
        out.human += "  lambda = " + tau_str(term.lambda) + "\n    x = " + vec_str(term.x) + "\n";
    if (!check.passed()) {
        out.status = "Failed";
        out.code = kExitSchmidt;
    }
    return out;
}

bool is_unit_triple(const SingularTriple& s) {
    return std::abs(norm(s.x) - 1.0) <= 1e-8 && std::abs(norm(s.y) - 1.0) <= 1e-8 &&
           std::abs(norm(s.z) - 1.0) <= 1e-8;
}

Outcome run_verify(const Tensor3& t, const Options& o) {
    Outcome out;
    const auto triples = io::read_triples_file(o.triples_path, t);
    const double tol = scaled_tol(t, o.cfg);
    Json items = Json::array();
    bool all = true;
    for (std::size_t i = 0; i < triples.size(); ++i) {
        const auto& s = triples[i];
        Json e = io::to_json(s);
        const bool unit = is_unit_triple(s);
        const bool verified = unit && verify_triple(t, s, tol).verified;
        all = all && verified;
        e["unit"] = unit;
        e["verified"] = verified;
        e["ordered"] = verified ? io::to_json(is_ordered(t, s, tol)) : Json(nullptr);
        const bool fd_ok = unit && s.tau > 0.0;
        e["stationarity"] = fd_ok ? Json(oracle::stationarity_fd_check(t, s)) : Json(nullptr);
        out.human += "triple " + std::to_string(i + 1) + ": " + (verified ? "verified" : "NOT verified") +
                     ", residuals " + fmt("%.3e", s.residuals[0]) + " " + fmt("%.3e", s.residuals[1]) +
                     " " + fmt("%.3e", s.residuals[2]) + "\n  " + triple_str(s);
        if (verified)
            out.human += std::string("    ordered: ") + (e["ordered"]["ordered"].get<bool>() ? "yes" : "no") + "\n";
        if (fd_ok)
            out.human += "    stationarity: " + fmt("%.3e", e["stationarity"].get<double>()) + "\n";
        items.push_back(std::move(e));
    }
    out.result["all_verified"] = all;
    out.result["triples"] = std::move(items);
    if (!all)
        out.status = "Failed";
    return out;
}

Json input_json(const Tensor3& t) {
    Json j;
    j["name"] = t.name() ? Json(*t.name()) : Json(nullptr);
    j["dims"] = {t.dims().n1, t.dims().n2, t.dims().n3};
    j["hs_norm"] = hs_norm(t);
    return j;
}

int emit_error(const std::string& command, const Options& o, const std::string& message) {
    std::cerr << "bilinear_cli: " << message << "\n";
    if (o.json) {
        Json r;
        r["command"] = command;
        r["status"] = "Error";
        r["error"] = message;
        std::cout << io::dump(r) << "\n";
    }
    return kExitInput;
}

template <class Run>
int execute(const std::string& command, const Options& o, Run run) {
    Tensor3 t({1, 1, 1});
    Outcome out;
    try {
        o.cfg.validate();
        t = io::read_tensor_file(o.tensor_path);
        out = run(t, o);
    } catch (const io::InputError& e) {
        return emit_error(command, o, e.what());
    } catch (const std::invalid_argument& e) {
        return emit_error(command, o, e.what());
    }
    if (o.json) {
        Json r;
        r["command"] = command;
        r["status"] = out.status;
        r["input"] = input_json(t);
        r["config"] = config_json(t, o.cfg);
        r["result"] = std::move(out.result);
        std::cout << io::dump(r) << "\n";
    } else {
        std::cout << out.human;
    }
    if (out.code != kExitOk)
        std::cerr << "bilinear_cli: " << command << ": " << out.status << "\n";
    return out.code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Norms, spectra and Schmidt/Schur representations of bilinear operators"};
    app.require_subcommand(1);
    Options o;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("tensor", o.tensor_path, "Tensor JSON file")->required();
        sub->add_option("--starts", o.cfg.starts, "Random starts (0: 64 * max dimension)");
        sub->add_option("--tol", o.cfg.residual_tol, "Residual tolerance");
        sub->add_option("--dedup-tol", o.cfg.dedup_tol, "Sign-orbit deduplication tolerance");
        sub->add_option("--max-iter", o.cfg.max_iter, "Power-iteration cap per start");
        sub->add_option("--seed", o.cfg.seed, "Random seed");
        sub->add_flag("--json", o.json, "Machine-readable report on stdout");
    };
    auto* norm_cmd = app.add_subcommand("norm", "Operator norm and Hilbert-Schmidt norm");
    auto* spectrum_cmd = app.add_subcommand("spectrum", "Singular triples with ordered classification");
    auto* schmidt_cmd = app.add_subcommand("schmidt", "Schmidt representation by deflation");
    auto* schur_cmd = app.add_subcommand("schur", "Schur representation of a symmetric self-adjoint operator");
    auto* verify_cmd = app.add_subcommand("verify", "Check user-supplied singular triples");
    for (auto* sub : {norm_cmd, spectrum_cmd, schmidt_cmd, schur_cmd, verify_cmd})
        add_common(sub);
    verify_cmd->add_option("triples", o.triples_path, "Triples JSON file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitInput;
    }

    if (*norm_cmd)
        return execute("norm", o, run_norm);
    if (*spectrum_cmd)
        return execute("spectrum", o, run_spectrum);
    if (*schmidt_cmd)
        return execute("schmidt", o, run_schmidt);
    if (*schur_cmd)
        return execute("schur", o, run_schur);
    return execute("verify", o, run_verify);
}
