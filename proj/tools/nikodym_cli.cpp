// Command-line front end: construct, verify, transform, experiment, bounds,
// bruteforce-min. Exit codes: 0 ok, 1 I/O or corrupt input, 2 verification
// failure, 3 bad parameters.

#include "nikodym/constructions.hpp"
#include "nikodym/error.hpp"
#include "nikodym/experiments.hpp"
#include "nikodym/report.hpp"
#include "nikodym/setfile.hpp"
#include "nikodym/verify.hpp"

#include <CLI11.hpp>
#include <omp.h>

#include <charconv>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

using namespace nikodym;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitVerify = 2;
constexpr int kExitParam = 3;

int exit_code_for(Errc e)
{
    switch (e) {
    case Errc::IoError:
    case Errc::CorruptFile:
        return kExitIo;
    case Errc::NotNikodym:
    case Errc::WitnessError:
    case Errc::NotFound:
        return kExitVerify;
    default:
        return kExitParam;
    }
}

struct Globals {
    int threads = 0;
    bool timing = false;
};

struct FieldArgs {
    std::uint64_t p = 3;
    unsigned m = 1;
    unsigned d = 2;

    void add(CLI::App* app, unsigned default_d)
    {
        d = default_d;
        app->add_option("--p", p, "field characteristic (odd prime)")->capture_default_str();
        app->add_option("--m", m, "extension degree")->capture_default_str();
        app->add_option("--d", d, "ambient dimension")->capture_default_str();
    }

    GeomPtr geometry() const { return Geometry::make(build_field(p, m), d); }

    std::string flags() const
    {
        return "--p " + std::to_string(p) + " --m " + std::to_string(m) + " --d " + std::to_string(d);
    }
};

std::string hex64(std::uint64_t v)
{
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::uint64_t fnv1a(std::span<const std::uint8_t> bytes)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (auto b : bytes) {
        h ^= b;
        h *= 0x100000001b3ULL;
    }
    return h;
}

// Shortest round-trip form.
std::string fmt_double(double v)
{
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

class Timer {
public:
    double seconds() const
    {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void finish_report(json& report, const Globals& g, const Timer& t, const std::string& path)
{
    if (g.timing) {
        report["wall_time_seconds"] = t.seconds();
        report["threads"] = omp_get_max_threads();
    }
    if (!path.empty())
        write_json(path, report);
}

json set_summary(const PointSet& s)
{
    const auto bytes = encode_set(s);
    return {{"size", s.size()}, {"complement_size", s.geom().num_points() - s.size()},
            {"file_digest_fnv1a", hex64(fnv1a(bytes))}};
}

// ---------------------------------------------------------------------------

struct ConstructArgs {
    std::string method;
    FieldArgs field;
    ConstructionParams params;
    std::string out, report, left, right;
    unsigned right_full = 0;
};

int run_construct(const ConstructArgs& a, const Globals& g)
{
    Timer timer;
    const std::string& method = a.method;
    std::string invocation = "construct --method " + method;

    std::optional<PointSet> result;
    json trace;
    GeomPtr geom;

    if (method == "product") {
        if (a.left.empty() || (a.right.empty() && a.right_full == 0))
            throw Error(Errc::ParamError, "product needs --left and one of --right / --right-full");
        PointSet left = load_set(a.left).set;
        PointSet right = a.right.empty()
            ? PointSet::full(Geometry::make(left.geom().field_ptr(), a.right_full))
            : load_set(a.right).set;
        result = product_set(left, right);
        geom = result->geom_ptr();
        trace = {{"left", set_summary(left)}, {"left_d", left.geom().dim()},
                 {"right", set_summary(right)}, {"right_d", right.geom().dim()},
                 {"right_full", a.right.empty()}};
        invocation += " --left LEFT " + (a.right.empty() ? "--right-full " + std::to_string(a.right_full) : "--right RIGHT");
    } else {
        a.params.validate();
        geom = a.field.geometry();
        invocation += " " + a.field.flags() + " --eps " + fmt_double(a.params.eps) + " --c-const " +
                      fmt_double(a.params.c_const) + " --seed " + std::to_string(a.params.seed) +
                      " --max-retries " + std::to_string(a.params.max_retries);
        if (method == "random") {
            auto r = random_nikodym_attempts(geom, a.params);
            trace = to_json(r.trace);
            if (r.set)
                result = std::move(*r.set);
        } else if (method == "quadric") {
            auto r = quadric_pipeline(geom, a.params);
            trace = to_json(r.trace);
            result = std::move(r.set);
        } else if (method == "parabola2d") {
            auto r = parabola2d(geom, a.params);
            trace = to_json(r.trace);
            result = std::move(r.set);
        } else {
            throw Error(Errc::ParamError, "unknown method " + method);
        }
    }

    json report = run_report("construct", *geom);
    report["invocation"] = invocation;
    report["method"] = method;
    if (method != "product")
        report["params"] = to_json(a.params);
    report["trace"] = trace;

    if (!result) {
        report["verification"] = {{"ok", false}, {"reason", "no attempt produced a Nikodym set"}};
        finish_report(report, g, timer, a.report);
        std::cerr << "construct: no verified set within " << a.params.max_retries << " attempts\n";
        return kExitVerify;
    }

    const auto check = nikodym_check(*result);
    report["verification"] = nikodym_summary(check);
    report["set"] = set_summary(*result);
    if (!a.out.empty())
        save_set(a.out, *result);
    finish_report(report, g, timer, a.report);

    std::cout << "method=" << method << " q=" << geom->q() << " d=" << geom->dim() << " size=" << result->size()
              << " nikodym=" << (check.ok ? "yes" : "no") << "\n";
    return check.ok ? kExitOk : kExitVerify;
}

// ---------------------------------------------------------------------------

struct VerifyArgs {
    std::string mode = "nikodym";
    std::string in, report;
};

int run_verify(const VerifyArgs& a, const Globals& g)
{
    Timer timer;
    const LoadedSet loaded = load_set(a.in);
    const PointSet& s = loaded.set;
    json report = run_report("verify", s.geom());
    report["invocation"] = "verify --mode " + a.mode + " --in SET";
    report["mode"] = a.mode;
    report["canonical_modulus"] = loaded.canonical_modulus;
    report["set"] = set_summary(s);

    bool ok = false;
    if (a.mode == "kakeya") {
        const auto r = kakeya_check(s);
        ok = r.ok;
        report["verification"] = kakeya_summary(r);
    } else {
        const auto r = nikodym_check(s, a.mode == "robust");
        ok = r.ok;
        report["verification"] = nikodym_summary(r);
    }
    finish_report(report, g, timer, a.report);
    if (!loaded.canonical_modulus)
        std::cerr << "verify: warning: set file uses a non-canonical modulus\n";
    std::cout << "mode=" << a.mode << " size=" << s.size() << " ok=" << (ok ? "yes" : "no") << "\n";
    return ok ? kExitOk : kExitVerify;
}

// ---------------------------------------------------------------------------

struct TransformArgs {
    std::string in, out, report;
    bool witnesses = false;
};

int run_transform(const TransformArgs& a, const Globals& g)
{
    Timer timer;
    const PointSet n = load_set(a.in).set;
    const auto witnesses = extract_witnesses(n);
    auto r = nikodym_to_kakeya(n, witnesses);
    json report = run_report("transform", n.geom());
    report["invocation"] = std::string("transform to-kakeya --in SET --out SET");
    report["trace"] = to_json(r.trace, a.witnesses);
    report["input"] = set_summary(n);
    report["set"] = set_summary(r.set);
    const bool ok = r.trace.kakeya_ok && r.trace.eb_holds && r.trace.kb_holds;
    report["verification"] = {{"ok", ok}};
    if (!a.out.empty())
        save_set(a.out, r.set);
    finish_report(report, g, timer, a.report);
    std::cout << "N=" << r.trace.N_size << " K=" << r.trace.K_size << " kakeya=" << (r.trace.kakeya_ok ? "yes" : "no")
              << " eb=" << (r.trace.eb_holds ? "yes" : "no") << " kb=" << (r.trace.kb_holds ? "yes" : "no") << "\n";
    return ok ? kExitOk : kExitVerify;
}

// ---------------------------------------------------------------------------

struct ExperimentArgs {
    FieldArgs field;
    std::uint64_t trials = 1000;
    std::uint64_t seed = 0;
    unsigned k = 3;
    unsigned degree = 2;
    std::string mode = "unconstrained";
    std::string omega = "1,0,0", omega2 = "0,1,0";
    bool exact = false;
    std::string csv, report;
};

std::vector<Elem> parse_vector(const std::string& text)
{
    std::vector<Elem> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        out.push_back(static_cast<Elem>(std::stoul(item)));
    return out;
}

std::ofstream open_csv(const std::string& path)
{
    std::ofstream out(path, std::ios::trunc);
    if (!out)
        throw Error(Errc::IoError, "cannot open " + path);
    return out;
}

int run_experiment(const std::string& which, const ExperimentArgs& a, const Globals& g)
{
    Timer timer;
    json stats;
    if (which == "derangement") {
        const auto f = build_field(a.field.p, a.field.m);
        const auto s = derangement_experiment(*f, a.degree, a.trials, a.seed);
        stats = to_json(s);
        if (!a.csv.empty()) {
            auto out = open_csv(a.csv);
            out << "q,D,trials,rootless,rootless_fraction,exact_fraction,delta_D\n";
            out << s.q << ',' << s.D << ',' << s.trials << ',' << s.rootless << ',' << fmt_double(s.rootless_fraction)
                << ',' << fmt_double(s.exact_fraction) << ',' << fmt_double(s.delta_D) << '\n';
        }
        json report = {{"tool", kToolName}, {"version", kToolVersion}, {"schema", kReportSchema},
                       {"command", "experiment derangement"}, {"field", to_json(*f)},
                       {"invocation", "experiment derangement --p " + std::to_string(a.field.p) + " --m " +
                                          std::to_string(a.field.m) + " --degree " + std::to_string(a.degree) +
                                          " --trials " + std::to_string(a.trials) + " --seed " + std::to_string(a.seed)},
                       {"stats", stats}};
        finish_report(report, g, timer, a.report);
        std::cout << stats.dump(2) << '\n';
        return kExitOk;
    }

    const GeomPtr geom = a.field.geometry();
    json report = run_report("experiment " + which, *geom);
    std::string invocation = "experiment " + which + " " + a.field.flags();

    if (which == "moments") {
        if (a.k < 1)
            throw Error(Errc::ParamError, "k must be positive");
        const auto mode = a.mode == "exclude-perfect-squares" ? MomentMode::ExcludePerfectSquares : MomentMode::Unconstrained;
        const auto s = moments_experiment(geom, a.k, a.trials, mode, a.seed);
        stats = to_json(s);
        invocation += " --k " + std::to_string(a.k) + " --mode " + a.mode;
        if (!a.csv.empty()) {
            auto out = open_csv(a.csv);
            out << "trial,size\n";
            for (std::size_t t = 0; t < s.sizes.size(); ++t)
                out << t << ',' << s.sizes[t] << '\n';
        }
    } else if (which == "langweil") {
        const auto s = lang_weil_experiment(geom, a.trials, a.seed);
        stats = to_json(s);
        if (!a.csv.empty()) {
            auto out = open_csv(a.csv);
            out << "trial,size\n";
            for (std::size_t t = 0; t < s.sizes.size(); ++t)
                out << t << ',' << s.sizes[t] << '\n';
        }
    } else if (which == "irreducible") {
        const auto s = a.exact ? irreducible_fraction_exact(geom->field(), geom->dim())
                               : irreducible_fraction_experiment(geom, a.trials, a.seed);
        stats = to_json(s);
        stats["exact"] = a.exact;
        if (a.exact)
            invocation += " --exact";
        if (!a.csv.empty()) {
            auto out = open_csv(a.csv);
            out << "trials,irreducible,fraction\n";
            out << s.trials << ',' << s.irreducible << ',' << fmt_double(s.fraction) << '\n';
        }
    } else if (which == "pairwise") {
        const auto v1 = parse_vector(a.omega);
        const auto v2 = parse_vector(a.omega2);
        if (v1.size() != geom->dim() || v2.size() != geom->dim())
            throw Error(Errc::DimensionMismatch, "direction vectors must have d entries");
        for (auto c : v1)
            if (c >= geom->q())
                throw Error(Errc::ParamError, "coordinate out of range");
        for (auto c : v2)
            if (c >= geom->q())
                throw Error(Errc::ParamError, "coordinate out of range");
        const Direction o1 = geom->canonical_direction(v1);
        const Direction o2 = geom->canonical_direction(v2);
        const auto table = pairwise_independence_bruteforce(geom, o1.ordinal, o2.ordinal);
        const auto [lo, hi] = std::minmax_element(table.begin(), table.end());
        stats = {{"omega", to_json(o1)}, {"omega_prime", to_json(o2)}, {"table", table},
                 {"min_cell", *lo}, {"max_cell", *hi}, {"uniform", *lo == *hi}};
        invocation += " --omega " + a.omega + " --omega2 " + a.omega2;
        if (!a.csv.empty()) {
            auto out = open_csv(a.csv);
            out << "h_omega,h_omega_prime,count\n";
            for (std::uint32_t i = 0; i < geom->q(); ++i)
                for (std::uint32_t j = 0; j < geom->q(); ++j)
                    out << i << ',' << j << ',' << table[std::size_t{i} * geom->q() + j] << '\n';
        }
    } else {
        throw Error(Errc::ParamError, "unknown experiment " + which);
    }
    if (which != "pairwise" && !(which == "irreducible" && a.exact))
        invocation += " --trials " + std::to_string(a.trials) + " --seed " + std::to_string(a.seed);

    report["invocation"] = invocation;
    report["stats"] = stats;
    finish_report(report, g, timer, a.report);
    std::cout << stats.dump(2) << '\n';
    return kExitOk;
}

// ---------------------------------------------------------------------------

int run_bounds(const FieldArgs& a)
{
    const auto f = build_field(a.p, a.m);
    std::cout << to_json(known_bounds(f->q(), a.d)).dump(2) << '\n';
    return kExitOk;
}

struct BruteArgs {
    FieldArgs field;
    std::string kind = "kakeya";
};

int run_bruteforce(const BruteArgs& a)
{
    const auto geom = a.field.geometry();
    const auto kind = a.kind == "nikodym" ? SetKind::Nikodym : SetKind::Kakeya;
    const auto r = brute_force_minimum(geom, kind);
    json j = {{"kind", a.kind}, {"q", geom->q()}, {"d", geom->dim()}, {"minimum", r.size},
              {"example", r.example.members()}, {"subsets_checked", r.subsets_checked}};
    std::cout << j.dump(2) << '\n';
    return kExitOk;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Nikodym and Kakeya sets over finite fields"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--threads", g.threads, "worker threads (0 = OpenMP default)");
    app.add_flag("--timing", g.timing, "record wall time in reports");

    ConstructArgs ca;
    auto* construct = app.add_subcommand("construct", "build a Nikodym set");
    construct->add_option("--method", ca.method)->required()->check(CLI::IsMember({"random", "quadric", "parabola2d", "product"}));
    ca.field.add(construct, 2);
    construct->add_option("--eps", ca.params.eps)->capture_default_str();
    construct->add_option("--c-const", ca.params.c_const)->capture_default_str();
    construct->add_option("--seed", ca.params.seed)->capture_default_str();
    construct->add_option("--max-retries", ca.params.max_retries)->capture_default_str();
    construct->add_option("--out", ca.out, "set file to write");
    construct->add_option("--report", ca.report, "JSON report path");
    construct->add_option("--left", ca.left, "product: first factor");
    construct->add_option("--right", ca.right, "product: second factor");
    construct->add_option("--right-full", ca.right_full, "product: second factor is all of F_q^D");

    VerifyArgs va;
    auto* verify = app.add_subcommand("verify", "check a set file");
    verify->add_option("--mode", va.mode)->check(CLI::IsMember({"nikodym", "kakeya", "robust"}))->capture_default_str();
    verify->add_option("--in", va.in)->required();
    verify->add_option("--report", va.report);

    TransformArgs ta;
    auto* transform = app.add_subcommand("transform", "set transforms");
    transform->require_subcommand(1);
    auto* to_kakeya = transform->add_subcommand("to-kakeya", "Nikodym set to Kakeya set");
    to_kakeya->add_option("--in", ta.in)->required();
    to_kakeya->add_option("--out", ta.out);
    to_kakeya->add_option("--report", ta.report);
    to_kakeya->add_flag("--witnesses", ta.witnesses, "include the witness map in the report");

    ExperimentArgs ea;
    ea.field.d = 3;
    auto* experiment = app.add_subcommand("experiment", "Monte Carlo and exhaustive experiments");
    experiment->require_subcommand(1);
    std::string which;
    for (const char* name : {"moments", "derangement", "langweil", "irreducible", "pairwise"}) {
        auto* sub = experiment->add_subcommand(name);
        sub->callback([&which, name] { which = name; });
        // Each subcommand binds the same storage; only one runs.
        sub->add_option("--p", ea.field.p)->capture_default_str();
        sub->add_option("--m", ea.field.m)->capture_default_str();
        if (std::string(name) != "derangement")
            sub->add_option("--d", ea.field.d)->capture_default_str();
        sub->add_option("--trials", ea.trials)->capture_default_str();
        sub->add_option("--seed", ea.seed)->capture_default_str();
        sub->add_option("--csv", ea.csv);
        sub->add_option("--report", ea.report);
        if (std::string(name) == "moments") {
            sub->add_option("--k", ea.k)->capture_default_str();
            sub->add_option("--mode", ea.mode)->check(CLI::IsMember({"unconstrained", "exclude-perfect-squares"}));
        }
        if (std::string(name) == "derangement")
            sub->add_option("--degree", ea.degree)->capture_default_str();
        if (std::string(name) == "irreducible")
            sub->add_flag("--exact", ea.exact);
        if (std::string(name) == "pairwise") {
            sub->add_option("--omega", ea.omega)->capture_default_str();
            sub->add_option("--omega2", ea.omega2)->capture_default_str();
        }
    }

    FieldArgs ba;
    auto* bounds = app.add_subcommand("bounds", "known size bounds");
    ba.add(bounds, 2);

    BruteArgs bra;
    auto* brute = app.add_subcommand("bruteforce-min", "exhaustive minimum at q = 3, d = 2");
    bra.field.add(brute, 2);
    brute->add_option("--kind", bra.kind)->check(CLI::IsMember({"nikodym", "kakeya"}))->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitParam;
    }

    if (g.threads > 0)
        omp_set_num_threads(g.threads);

    if (construct->parsed() && ca.method == "quadric" && construct->count("--d") == 0)
        ca.field.d = 3;

    try {
        if (construct->parsed())
            return run_construct(ca, g);
        if (verify->parsed())
            return run_verify(va, g);
        if (to_kakeya->parsed())
            return run_transform(ta, g);
        if (experiment->parsed())
            return run_experiment(which, ea, g);
        if (bounds->parsed())
            return run_bounds(ba);
        if (brute->parsed())
            return run_bruteforce(bra);
    } catch (const Error& e) {
        std::cerr << "nikodym: " << e.what() << '\n';
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        std::cerr << "nikodym: " << e.what() << '\n';
        return kExitParam;
    }
    return kExitParam;
}
