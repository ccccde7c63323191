#include "certint/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <random>
#include <set>
#include <stdexcept>

#include <CLI11.hpp>

#include "certint/darboux.hpp"
#include "certint/flatness.hpp"
#include "certint/parser.hpp"
#include "certint/report.hpp"
#include "certint/volterra.hpp"

namespace certint::cli {

using report::json;

namespace {

json base_report(const RunConfig& cfg)
{
    json j;
    j["schema_version"] = report::kSchemaVersion;
    j["command"] = cfg.command;
    j["generated_at"] = report::utc_timestamp();
    return j;
}

void emit(const RunConfig& cfg, const json& j, std::ostream& out)
{
    if (cfg.out.empty()) {
        out << j.dump(2) << '\n';
        return;
    }
    std::ofstream f(cfg.out);
    if (!f) {
        throw std::runtime_error("cannot open output file " + cfg.out);
    }
    f << j.dump(2) << '\n';
}

ExtendedExpr parse_extended(const std::string& text, bool zero_extend) { return {parse(text), zero_extend}; }

std::size_t max_steps_of(const RunConfig& cfg) { return cfg.max_steps > 0 ? cfg.max_steps : default_max_steps(); }

} // namespace

void validate(const RunConfig& cfg)
{
    if (!std::isfinite(cfg.a) || !std::isfinite(cfg.b) || !(cfg.a < cfg.b)) {
        throw std::invalid_argument("domain endpoints must be finite with a < b");
    }
    if (!(cfg.tol > 0.0) || !std::isfinite(cfg.tol)) {
        throw std::invalid_argument("tol must be positive");
    }
    for (const int n : cfg.n) {
        if (n <= 1) {
            throw std::invalid_argument("n entries must be integers > 1");
        }
    }
    if (cfg.command == "enclose" && cfg.f.empty() == cfg.oracle.empty()) {
        throw std::invalid_argument("enclose needs exactly one of --f and --oracle");
    }
    if (cfg.command == "volterra") {
        if (cfg.H.empty()) {
            throw std::invalid_argument("volterra needs --H");
        }
        if (cfg.uniform.empty() && cfg.random.empty()) {
            throw std::invalid_argument("volterra needs at least one --uniform or --random partition");
        }
        for (const auto sizes : {&cfg.uniform, &cfg.random}) {
            for (const std::size_t n : *sizes) {
                if (n == 0) {
                    throw std::invalid_argument("partition sizes must be positive");
                }
            }
        }
    }
    if (cfg.command == "flatness") {
        if (cfg.f.empty()) {
            throw std::invalid_argument("flatness needs --f");
        }
        if (cfg.n.empty()) {
            throw std::invalid_argument("flatness needs --n");
        }
        if (!std::isfinite(cfg.C) || !(cfg.C > 0.0)) {
            throw std::invalid_argument("C must be finite and positive");
        }
    }
}

std::vector<double> random_partition_points(double a, double b, std::size_t blocks, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(a, b);
    std::set<double> interior;
    while (interior.size() + 1 < blocks) {
        const double x = dist(rng);
        if (a < x && x < b) {
            interior.insert(x);
        }
    }
    std::vector<double> pts;
    pts.reserve(blocks + 1);
    pts.push_back(a);
    pts.insert(pts.end(), interior.begin(), interior.end());
    pts.push_back(b);
    return pts;
}

int cmd_enclose(const RunConfig& cfg, std::ostream& out, std::ostream&)
{
    std::unique_ptr<RangeOracle> oracle;
    json j = base_report(cfg);
    if (!cfg.oracle.empty()) {
        if (cfg.oracle == "dirichlet") {
            oracle = std::make_unique<ConstantBoundsOracle>(ConstantBoundsOracle::dirichlet());
        } else if (cfg.oracle == "thomae-like") {
            oracle = std::make_unique<ThomaeOracle>();
        } else {
            throw std::invalid_argument("unknown oracle '" + cfg.oracle + "' (expected dirichlet or thomae-like)");
        }
        j["config"]["oracle"] = cfg.oracle;
    } else {
        const ExtendedExpr f = parse_extended(cfg.f, cfg.zero_extend);
        oracle = std::make_unique<ExprOracle>(f);
        j["config"]["f"] = to_string(f);
    }
    const std::size_t steps = max_steps_of(cfg);
    j["config"]["a"] = cfg.a;
    j["config"]["b"] = cfg.b;
    j["config"]["tol"] = cfg.tol;
    j["config"]["max_steps"] = steps;

    const DarbouxEnclosure enc = enclose(*oracle, Interval(cfg.a, cfg.b), cfg.tol, steps);
    if (!cfg.csv.empty()) {
        std::ofstream csv(cfg.csv);
        if (!csv) {
            throw std::runtime_error("cannot open CSV file " + cfg.csv);
        }
        write_history_csv(csv, enc);
    }
    const int code = enc.converged() ? exit_code::ok : exit_code::not_converged;
    j["result"] = report::to_json(enc);
    j["exit_code"] = code;
    emit(cfg, j, out);
    return code;
}

int cmd_volterra(const RunConfig& cfg, std::ostream& out, std::ostream& err)
{
    const ExtendedExpr H = parse_extended(cfg.H, cfg.zero_extend);
    const Interval domain(cfg.a, cfg.b);
    json j = base_report(cfg);
    j["config"] = {{"H", to_string(H)}, {"a", cfg.a}, {"b", cfg.b}, {"seed", cfg.seed}};
    j["config"]["uniform"] = cfg.uniform;
    j["config"]["random"] = cfg.random;
    j["config"]["derivative"] = to_string(differentiate(H));

    bool unverified = false;
    bool failed = false;
    json verdicts = json::array();
    auto run_one = [&](const Partition& p, const char* kind) {
        const SandwichVerdict v = sandwich_check(H, domain, p);
        json vj = report::to_json(v);
        vj["partition"] = kind;
        verdicts.push_back(vj);
        unverified = unverified || v.outcome == SandwichOutcome::unverified_hypothesis;
        failed = failed || v.outcome == SandwichOutcome::fail;
    };
    for (const std::size_t n : cfg.uniform) {
        run_one(Partition::uniform(cfg.a, cfg.b, n), "uniform");
    }
    for (std::size_t i = 0; i < cfg.random.size(); ++i) {
        run_one(Partition(random_partition_points(cfg.a, cfg.b, cfg.random[i], cfg.seed + i)), "random");
    }

    int code = exit_code::ok;
    if (failed) {
        code = exit_code::sandwich_failed;
        err << "error: sandwich verdict failed (soundness bug)\n";
    } else if (unverified) {
        code = exit_code::unverified_hypothesis;
        err << "note: unverified-hypothesis: the derivative could not be certified bounded\n";
    }
    j["result"] = {{"verdicts", verdicts}, {"all_pass", !failed && !unverified}};
    j["exit_code"] = code;
    emit(cfg, j, out);
    return code;
}

int cmd_flatness(const RunConfig& cfg, std::ostream& out, std::ostream&)
{
    const FlatCandidate cand(parse_extended(cfg.f, cfg.zero_extend), cfg.C);
    json j = base_report(cfg);
    j["config"] = {{"f", to_string(cand.f)}, {"C", cfg.C}, {"n", cfg.n}};

    bool falsified = false;
    bool inconclusive = false;
    auto tally = [&](const ConditionReport& r) {
        falsified = falsified || r.status == ConditionStatus::falsified;
        inconclusive = inconclusive || r.status == ConditionStatus::inconclusive ||
                       r.status == ConditionStatus::certified_modulo_tail;
    };
    auto condition_json = [&](const ConditionReport& r) {
        json cj = report::to_json(r);
        if (r.status == ConditionStatus::falsified) {
            cj["witness_reverifies"] = witness_reverifies(cand, r);
        }
        return cj;
    };

    const ConditionReport zero = check_zero(cand);
    const ConditionReport stoica = check_stoica(cand);
    tally(zero);
    tally(stoica);
    json result;
    result["zero"] = condition_json(zero);
    result["stoica"] = condition_json(stoica);
    result["uno"] = json::array();
    result["level_sets"] = json::array();
    result["chains"] = json::array();

    for (const int n : cfg.n) {
        const ConditionReport uno = check_uno(cand, n);
        tally(uno);
        result["uno"].push_back(condition_json(uno));

        const MinLevelSet ls = locate_min_en(cand, n, uno);
        inconclusive = inconclusive || ls.status == LevelSetStatus::inconclusive;
        json lj = report::to_json(ls);
        lj["n"] = n;
        result["level_sets"].push_back(lj);

        json chain;
        if (static_cast<double>(n) > cand.C) {
            const ChainTrace t = chain_evaluate(cand, n);
            chain = report::to_json(t);
            chain["skipped"] = false;
            for (const auto& s : t.steps) {
                falsified = falsified || s.status == StepStatus::unjustified || s.status == StepStatus::refuted;
                inconclusive = inconclusive || s.status == StepStatus::unverified;
            }
        } else {
            chain = {{"n", n}, {"C", cfg.C}, {"skipped", true}, {"note", "chain requires n > C"}};
        }
        result["chains"].push_back(chain);
    }

    if (zero.certified() && stoica.certified()) {
        const auto bound = derivative_bound(cand);
        result["derivative_bound"] = bound ? report::to_json(*bound) : json(nullptr);
    } else {
        result["derivative_bound"] = nullptr;
    }

    int code = exit_code::ok;
    if (falsified) {
        code = exit_code::falsified;
    } else if (inconclusive) {
        code = exit_code::inconclusive;
    }
    result["verdict"] = code == exit_code::ok ? "certified" : code == exit_code::falsified ? "falsified" : "inconclusive";
    j["result"] = result;
    j["exit_code"] = code;
    emit(cfg, j, out);
    return code;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    RunConfig cfg;
    CLI::App app{"Certified Darboux enclosures, Volterra sandwich checks and flatness conditions", "certint"};
    app.set_config("--config", "", "Read options from a TOML/INI file");
    app.require_subcommand(1);

    auto domain_opts = [&](CLI::App* sub) {
        sub->add_option("--a", cfg.a, "Left end of the domain");
        sub->add_option("--b", cfg.b, "Right end of the domain");
        sub->add_flag("--zero-extend", cfg.zero_extend, "Define the function as 0 at x = 0");
        sub->add_option("--out", cfg.out, "Write the JSON report to a file instead of stdout");
    };

    CLI::App* enc = app.add_subcommand("enclose", "Enclose the lower and upper Darboux integrals");
    enc->add_option("--f", cfg.f, "Integrand expression in x");
    enc->add_option("--oracle", cfg.oracle, "Built-in range oracle")->check(CLI::IsMember({"dirichlet", "thomae-like"}));
    enc->add_option("--tol", cfg.tol, "Target gap between the sums");
    enc->add_option("--max-steps", cfg.max_steps, "Bisection budget (default: DARBOUX_MAX_STEPS or 100000)");
    enc->add_option("--csv", cfg.csv, "Write the convergence history as CSV");
    domain_opts(enc);

    CLI::App* vol = app.add_subcommand("volterra", "Check the Volterra sandwich for H' on given partitions");
    vol->add_option("--H", cfg.H, "Antiderivative expression in x");
    vol->add_option("--uniform", cfg.uniform, "Uniform partition with N subintervals (repeatable or comma separated)")->delimiter(',');
    vol->add_option("--random", cfg.random, "Seeded random partition with N subintervals (repeatable or comma separated)")->delimiter(',');
    vol->add_option("--seed", cfg.seed, "Seed for random partitions");
    domain_opts(vol);

    CLI::App* flat = app.add_subcommand("flatness", "Check the flatness conditions and the contradiction chain");
    flat->add_option("--f", cfg.f, "Candidate expression in x on [0, 1]");
    flat->add_option("--C", cfg.C, "Constant of |x f'(x)| <= C |f(x)|");
    flat->add_option("--n", cfg.n, "Exponents, comma separated")->delimiter(',');
    flat->add_flag("--zero-extend", cfg.zero_extend, "Define the function as 0 at x = 0");
    flat->add_option("--out", cfg.out, "Write the JSON report to a file instead of stdout");

    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_code::ok : exit_code::input_error;
    }

    try {
        if (enc->parsed()) {
            cfg.command = "enclose";
            validate(cfg);
            return cmd_enclose(cfg, out, err);
        }
        if (vol->parsed()) {
            cfg.command = "volterra";
            validate(cfg);
            return cmd_volterra(cfg, out, err);
        }
        cfg.command = "flatness";
        validate(cfg);
        return cmd_flatness(cfg, out, err);
    } catch (const ParseError& e) {
        err << "error: " << e.what() << '\n';
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
    }
    return exit_code::input_error;
}

} // namespace certint::cli
