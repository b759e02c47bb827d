// Copyright (c) linrank contributors.
// SPDX-License-Identifier: Apache-2.0
#include "cli.hpp"

#include "linrank/llrf.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

namespace linrank::cli {
namespace {

using nlohmann::ordered_json;

struct Options {
    std::string mode = "lrf";
    std::string domain = "int";
    bool witness = false;
    std::string bound;
    std::string engine = "farkas";
    std::string hull;
    std::string format = "text";
    std::string check;
    std::vector<std::string> files;
};

// A failure that maps to an exit code, with the message for stderr.
struct Failure {
    int code;
    std::string message;
};

struct FileResult {
    ordered_json json;
    std::string text;
    int code = Found;
};

std::string trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) {
        return {};
    }
    auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) {
        out.push_back(trim(cur));
    }
    return out;
}

std::optional<std::string> read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        return std::nullopt;
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

HullOptions parse_hull(const std::string& text) {
    HullOptions h;
    if (text.empty()) {
        return h;
    }
    for (const auto& item : split(text, ',')) {
        auto eq = item.find('=');
        if (eq == std::string::npos) {
            throw Failure{Usage, "--hull: expected key=value, got '" + item + "'"};
        }
        std::string key = trim(item.substr(0, eq));
        std::string val = trim(item.substr(eq + 1));
        if (key == "cut_round_cap") {
            try {
                std::size_t used = 0;
                h.cut_round_cap = std::stoi(val, &used);
                if (used != val.size() || h.cut_round_cap < 0) {
                    throw std::invalid_argument(val);
                }
            } catch (const std::logic_error&) {
                throw Failure{Usage, "--hull: cut_round_cap needs a non-negative integer"};
            }
        } else if (key == "octagon") {
            if (val == "closure") {
                h.octagon_mode = OctagonMode::Closure;
            } else if (val == "exact") {
                h.octagon_mode = OctagonMode::Exact;
            } else {
                throw Failure{Usage, "--hull: octagon must be closure or exact"};
            }
        } else {
            throw Failure{Usage, "--hull: unknown option '" + key + "'"};
        }
    }
    return h;
}

RatVector parse_vector(const std::string& text, const std::string& what) {
    RatVector v;
    std::string norm = text;
    std::replace(norm.begin(), norm.end(), ',', ' ');
    std::istringstream in(norm);
    std::string tok;
    while (in >> tok) {
        try {
            v.push_back(parse_rational(tok));
        } catch (const std::exception&) {
            throw Failure{Usage, what + ": '" + tok + "' is not a rational number"};
        }
    }
    return v;
}

ordered_json rational_json(const Rational& q) { return to_string(q); }

ordered_json vector_json(std::span<const Rational> v) {
    ordered_json a = ordered_json::array();
    for (const auto& q : v) {
        a.push_back(rational_json(q));
    }
    return a;
}

ordered_json function_json(const AffineFunc& f, std::span<const std::string> vars) {
    return ordered_json{{"text", format_affine(f, vars)},
                        {"coeffs", vector_json(f.coeffs)},
                        {"constant", rational_json(f.constant)}};
}

ordered_json llrf_json(const Llrf& f, std::span<const std::string> vars) {
    ordered_json comps = ordered_json::array();
    for (const auto& c : f.components) {
        comps.push_back(function_json(c, vars));
    }
    return ordered_json{{"kind", f.kind == LlrfKind::Strong ? "strong" : "weak"},
                        {"domain", to_string(f.domain)},
                        {"components", comps},
                        {"deltas", vector_json(f.deltas)}};
}

ordered_json witness_json(const Witness& w) {
    ordered_json paths = ordered_json::array();
    for (std::size_t p = 0; p < w.points.size(); ++p) {
        ordered_json pts = ordered_json::array();
        ordered_json rays = ordered_json::array();
        for (const auto& x : w.points[p]) {
            pts.push_back(vector_json(x));
        }
        for (const auto& y : w.rays[p]) {
            rays.push_back(vector_json(y));
        }
        paths.push_back(ordered_json{{"path", p + 1}, {"points", pts}, {"rays", rays}});
    }
    return ordered_json{{"size", w.size()}, {"paths", paths}};
}

ordered_json hull_json(const std::vector<HullReport>& hulls, bool exact) {
    ordered_json paths = ordered_json::array();
    for (std::size_t p = 0; p < hulls.size(); ++p) {
        ordered_json comps = ordered_json::array();
        for (const auto& c : hulls[p].components) {
            comps.push_back(ordered_json{{"method", to_string(c.tag)}, {"exact", c.exact}});
        }
        paths.push_back(ordered_json{{"path", p + 1},
                                     {"exact", hulls[p].exact},
                                     {"guard_only", hulls[p].guard_only},
                                     {"components", comps}});
    }
    return ordered_json{{"exact", exact}, {"paths", paths}};
}

std::string vector_text(std::span<const Rational> v) {
    std::string out = "(";
    for (std::size_t i = 0; i < v.size(); ++i) {
        out += (i ? ", " : "") + to_string(v[i]);
    }
    return out + ")";
}

std::string witness_text(const Witness& w) {
    std::string out;
    for (std::size_t p = 0; p < w.points.size(); ++p) {
        for (const auto& x : w.points[p]) {
            out += "  point path " + std::to_string(p + 1) + ": " + vector_text(x) + "\n";
        }
        for (const auto& y : w.rays[p]) {
            out += "  ray path " + std::to_string(p + 1) + ": " + vector_text(y) + "\n";
        }
    }
    return out;
}

std::string llrf_text(const Llrf& f, std::span<const std::string> vars, const std::string& indent) {
    std::string out;
    for (std::size_t i = 0; i < f.dim(); ++i) {
        out += indent + "rho" + std::to_string(i + 1) + " = " + format_affine(f.components[i], vars);
        if (i < f.deltas.size()) {
            out += "  (delta " + to_string(f.deltas[i]) + ")";
        }
        out += "\n";
    }
    return out;
}

int verdict_code(Verdict v) {
    switch (v) {
    case Verdict::Found:
    case Verdict::Vacuous:
        return Found;
    case Verdict::None:
        return NoneFound;
    case Verdict::NonTerminating:
        return NonTerminating;
    case Verdict::NoneModuloHull:
        return NoneModuloHull;
    }
    return Internal;
}

void add_bound(FileResult& r, const Llrf& f, std::span<const Rational> x0, bool valid) {
    BoundReport b = llrf::iteration_bound(f, x0);
    ordered_json contributions = ordered_json::array();
    for (const auto& c : b.contributions) {
        contributions.push_back(c.get_str());
    }
    r.json["bound"] = ordered_json{{"x0", vector_json(x0)},
                                   {"value", b.bound.get_str()},
                                   {"contributions", contributions},
                                   {"first_negative", b.first_negative},
                                   {"literal_value", b.literal_bound.get_str()},
                                   {"valid", valid}};
    r.text += "  bound from " + vector_text(x0) + ": " + b.bound.get_str() + (valid ? "" : " (not guaranteed: some path stops early in the chain)") + "\n";
}

struct Context {
    const Options& opt;
    Domain domain;
    HullOptions hull;
    std::optional<RatVector> x0;
};

void analyze_lrf(const Context& ctx, const TransitionSystem& ts, FileResult& r) {
    LrfQuery q;
    q.ts = ts;
    q.domain = ctx.domain;
    q.witness_wanted = ctx.opt.witness;
    q.engine = ctx.opt.engine == "generators" ? LrfEngine::Generators : LrfEngine::Farkas;
    q.hull = ctx.hull;
    LrfVerdict v = lrf::synth_lrf(q);
    r.code = verdict_code(v.kind);
    r.json["verdict"] = to_string(v.kind);
    r.text += to_string(v.kind) + "\n";
    if (v.kind == Verdict::Found) {
        if (!lrf::verify_lrf(*v.rho, ts, ctx.domain, ctx.hull)) {
            throw Failure{Internal, "self-check failed for the synthesized function"};
        }
        r.json["function"] = function_json(*v.rho, ts.vars);
        r.text += "  rho = " + format_affine(*v.rho, ts.vars) + "\n";
        if (ctx.x0) {
            Llrf f{{*v.rho}, {Rational(1)}, LlrfKind::Strong, ctx.domain};
            add_bound(r, f, *ctx.x0, true);
        }
    }
    if (v.witness) {
        if (!lrf::verify_lrf_witness(*v.witness, ts, ctx.domain)) {
            throw Failure{Internal, "self-check failed for the witness"};
        }
        r.json["witness"] = witness_json(*v.witness);
        r.text += witness_text(*v.witness);
    }
    if (!v.origin_paths.empty()) {
        ordered_json paths = ordered_json::array();
        for (auto p : v.origin_paths) {
            paths.push_back(p + 1);
        }
        r.json["origin_paths"] = paths;
    }
    if (ctx.domain == Domain::Integer) {
        r.json["hull"] = hull_json(v.hulls, v.hulls_exact);
    }
}

void analyze_llrf(const Context& ctx, const TransitionSystem& ts, FileResult& r) {
    LlrfQuery q;
    q.ts = ts;
    q.domain = ctx.domain;
    q.witness_wanted = ctx.opt.witness;
    q.hull = ctx.hull;
    LlrfVerdict v = llrf::synth_llrf(q);
    r.code = verdict_code(v.kind);
    r.json["verdict"] = to_string(v.kind);
    r.text += to_string(v.kind) + "\n";
    if (v.kind == Verdict::Found) {
        CheckResult ok = ctx.domain == Domain::Integer
                             ? llrf::verify_strong_llrf(*v.llrf, ts, ctx.hull)
                             : llrf::verify_weak_llrf(v.llrf->components, ts, Domain::Rational, ctx.hull);
        if (ok && v.strong && ctx.domain == Domain::Rational) {
            ok = llrf::verify_strong_llrf(v.strong->llrf, ts, ctx.hull);
        }
        if (!ok) {
            throw Failure{Internal, "self-check failed: " + ok.reason};
        }
        r.json["dimension"] = v.llrf->dim();
        r.json["llrf"] = llrf_json(*v.llrf, ts.vars);
        r.text += llrf_text(*v.llrf, ts.vars, "  ");
        if (v.strong) {
            r.json["strong"] = ordered_json{{"function", llrf_json(v.strong->llrf, ts.vars)},
                                            {"normalized", llrf_json(v.strong->normalized, ts.vars)},
                                            {"scale", rational_json(v.strong->scale)},
                                            {"bound_valid", v.strong->bound_valid}};
            if (ctx.domain == Domain::Rational) {
                r.text += "  strong form:\n" + llrf_text(v.strong->llrf, ts.vars, "    ");
            }
        }
        if (ctx.x0) {
            if (v.strong) {
                add_bound(r, v.strong->llrf, *ctx.x0, v.strong->bound_valid);
            } else {
                add_bound(r, *v.llrf, *ctx.x0, true);
            }
        }
    }
    if (v.witness) {
        if (!llrf::verify_lex_witness(*v.witness, ts, ctx.domain)) {
            throw Failure{Internal, "self-check failed for the witness"};
        }
        r.json["witness"] = witness_json(*v.witness);
        r.text += witness_text(*v.witness);
    }
    if (!v.origin_paths.empty()) {
        ordered_json paths = ordered_json::array();
        for (auto p : v.origin_paths) {
            paths.push_back(p + 1);
        }
        r.json["origin_paths"] = paths;
    }
    if (ctx.domain == Domain::Integer) {
        r.json["hull"] = hull_json(v.hulls, v.hulls_exact);
    }
}

// Candidate file: "kind:" line, then "rho:" / "delta:" lines for functions or
// "point <path>:" / "ray <path>:" lines for witnesses.
struct Candidate {
    std::string kind;
    std::vector<AffineFunc> rho;
    std::vector<Rational> deltas;
    Witness witness;
};

Candidate parse_candidate(const std::string& text, const TransitionSystem& ts) {
    Candidate c;
    c.witness = empty_witness(ts.polys.size());
    std::istringstream in(text);
    std::string raw;
    std::size_t line_no = 0;
    auto fail = [&](const std::string& msg) { throw ParseError(line_no, 1, msg); };
    while (std::getline(in, raw)) {
        ++line_no;
        if (auto hash = raw.find('#'); hash != std::string::npos) {
            raw = raw.substr(0, hash);
        }
        std::string line = trim(raw);
        if (line.empty()) {
            continue;
        }
        auto colon = line.find(':');
        if (colon == std::string::npos) {
            fail("expected 'key: value'");
        }
        std::string key = trim(line.substr(0, colon));
        std::string val = trim(line.substr(colon + 1));
        if (key == "kind") {
            if (val != "lrf" && val != "llrf" && val != "lrf-witness" && val != "llrf-witness") {
                fail("unknown kind '" + val + "'");
            }
            c.kind = val;
        } else if (key == "rho") {
            try {
                auto [coeffs, constant] = loopmodel::parse_expression(val, ts.vars, false);
                coeffs.resize(ts.n);
                c.rho.push_back({coeffs, constant});
            } catch (const ParseError& e) {
                throw ParseError(line_no, raw.find(val, raw.find(':')) + e.column(), e.what());
            }
        } else if (key == "delta") {
            try {
                c.deltas.push_back(parse_rational(val));
            } catch (const std::exception&) {
                fail("bad delta '" + val + "'");
            }
        } else if (key.rfind("point", 0) == 0 || key.rfind("ray", 0) == 0) {
            bool point = key[0] == 'p';
            std::string idx = trim(key.substr(point ? 5 : 3));
            std::size_t path = 0;
            try {
                path = std::stoul(idx);
            } catch (const std::exception&) {
                fail("expected a path number after '" + std::string(point ? "point" : "ray") + "'");
            }
            if (path == 0 || path > ts.polys.size()) {
                fail("path " + idx + " does not exist");
            }
            RatVector v;
            try {
                v = parse_vector(val, "vector");
            } catch (const Failure& f) {
                fail(f.message);
            }
            if (v.size() != 2 * ts.n) {
                throw Failure{DataError, "line " + std::to_string(line_no) + ": vector has " +
                                             std::to_string(v.size()) + " entries, the loop needs " +
                                             std::to_string(2 * ts.n)};
            }
            (point ? c.witness.points : c.witness.rays)[path - 1].push_back(v);
        } else {
            fail("unknown key '" + key + "'");
        }
    }
    if (c.kind.empty()) {
        throw ParseError(1, 1, "missing 'kind:' line");
    }
    bool fn = c.kind == "lrf" || c.kind == "llrf";
    if (fn && c.rho.empty()) {
        throw ParseError(line_no, 1, "no 'rho:' line");
    }
    if (c.kind == "lrf" && c.rho.size() != 1) {
        throw ParseError(line_no, 1, "an lrf has exactly one 'rho:' line");
    }
    if (!c.deltas.empty() && c.deltas.size() != c.rho.size()) {
        throw ParseError(line_no, 1, "give one delta per component or none");
    }
    return c;
}

void run_check(const Context& ctx, const TransitionSystem& ts, FileResult& r) {
    auto text = read_file(ctx.opt.check);
    if (!text) {
        throw Failure{NoInput, ctx.opt.check + ": cannot read file"};
    }
    Candidate c;
    try {
        c = parse_candidate(*text, ts);
    } catch (const ParseError& e) {
        throw Failure{DataError, ctx.opt.check + ":" + std::to_string(e.line()) + ":" + std::to_string(e.column()) +
                                     ": " + e.what()};
    }
    CheckResult res;
    if (c.kind == "lrf") {
        res = lrf::verify_lrf(c.rho[0], ts, ctx.domain, ctx.hull) ? CheckResult::pass()
                                                                  : CheckResult::fail("not a ranking function");
    } else if (c.kind == "llrf") {
        if (c.deltas.empty()) {
            res = llrf::verify_weak_llrf(c.rho, ts, ctx.domain, ctx.hull);
        } else {
            Llrf f{c.rho, c.deltas, LlrfKind::Strong, ctx.domain};
            res = llrf::verify_strong_llrf(f, ts, ctx.hull);
        }
    } else if (c.kind == "lrf-witness") {
        res = lrf::verify_lrf_witness(c.witness, ts, ctx.domain);
    } else {
        res = llrf::verify_lex_witness(c.witness, ts, ctx.domain);
    }
    r.code = res ? Found : NoneFound;
    r.json["check"] = ordered_json{{"file", ctx.opt.check}, {"kind", c.kind}, {"passed", res.ok}};
    if (!res) {
        r.json["check"]["reason"] = res.reason;
    }
    r.text += std::string("check ") + (res ? "passed" : "failed: " + res.reason) + "\n";
}

FileResult analyze_file(const Context& ctx, const std::string& path) {
    FileResult r;
    r.json["schema"] = 1;
    r.json["file"] = path;
    r.json["mode"] = ctx.opt.mode;
    r.json["domain"] = to_string(ctx.domain);
    r.text = path + ": ";
    auto start = std::chrono::steady_clock::now();
    auto text = read_file(path);
    if (!text) {
        throw Failure{NoInput, path + ": cannot read file"};
    }
    TransitionSystem ts;
    try {
        ts = loopmodel::build_transition_system(loopmodel::parse_loop(*text));
    } catch (const ParseError& e) {
        throw Failure{DataError,
                      path + ":" + std::to_string(e.line()) + ":" + std::to_string(e.column()) + ": " + e.what()};
    }
    if (ctx.x0 && ctx.x0->size() != ts.n) {
        throw Failure{Usage, "--bound: " + std::to_string(ctx.x0->size()) + " values given, " + path + " has " +
                                 std::to_string(ts.n) + " variables"};
    }
    r.json["vars"] = ts.vars;
    if (!ctx.opt.check.empty()) {
        r.text += ctx.opt.mode + " " + to_string(ctx.domain) + " ";
        run_check(ctx, ts, r);
    } else {
        r.text += ctx.opt.mode + " " + to_string(ctx.domain) + " ";
        if (ctx.opt.mode == "lrf") {
            analyze_lrf(ctx, ts, r);
        } else {
            analyze_llrf(ctx, ts, r);
        }
    }
    auto elapsed = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start);
    r.json["time_ms"] = elapsed.count();
    return r;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options opt;
    CLI::App app{"Linear and lexicographic-linear ranking functions for linear-constraint loops", "linrank"};
    app.require_subcommand(1);
    CLI::App* analyze = app.add_subcommand("analyze", "Synthesize or check ranking functions");
    analyze->add_option("--mode", opt.mode, "lrf or llrf")->check(CLI::IsMember({"lrf", "llrf"}));
    analyze->add_option("--domain", opt.domain, "int or rat")->check(CLI::IsMember({"int", "rat"}));
    analyze->add_flag("--witness", opt.witness, "Produce a nonexistence witness");
    analyze->add_option("--bound", opt.bound, "Initial state for an iteration bound, comma separated");
    analyze->add_option("--engine", opt.engine, "LRF engine: farkas or generators")
        ->check(CLI::IsMember({"farkas", "generators"}));
    analyze->add_option("--hull", opt.hull, "Hull options: cut_round_cap=N,octagon=closure|exact");
    analyze->add_option("--format", opt.format, "text or json")->check(CLI::IsMember({"text", "json"}));
    analyze->add_option("--check", opt.check, "Check the candidate in this file instead of synthesizing");
    analyze->add_option("files", opt.files, "Loop files")->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n" << app.help();
        return Usage;
    }

    Context ctx{opt, opt.domain == "int" ? Domain::Integer : Domain::Rational, {}, std::nullopt};
    try {
        ctx.hull = parse_hull(opt.hull);
        if (!opt.bound.empty()) {
            ctx.x0 = parse_vector(opt.bound, "--bound");
        }
    } catch (const Failure& f) {
        err << "usage error: " << f.message << "\n";
        return f.code;
    }

    ordered_json all = ordered_json::array();
    int code = Found;
    for (const auto& path : opt.files) {
        try {
            FileResult r = analyze_file(ctx, path);
            code = std::max(code, r.code);
            if (opt.format == "json") {
                all.push_back(std::move(r.json));
            } else {
                out << r.text;
            }
        } catch (const Failure& f) {
            err << f.message << "\n";
            code = std::max(code, f.code);
        } catch (const std::exception& e) {
            err << path << ": internal error: " << e.what() << "\n";
            code = std::max(code, static_cast<int>(Internal));
        }
    }
    if (opt.format == "json") {
        if (all.size() == 1 && opt.files.size() == 1) {
            out << all[0].dump(2) << "\n";
        } else {
            out << all.dump(2) << "\n";
        }
    }
    return code;
}

} // namespace linrank::cli
