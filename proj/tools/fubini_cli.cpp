// fubini: tables, identity verification, generating-function truncations and
// Monte Carlo cross-checks for probabilistic degenerate Fubini polynomials.
//
//   fubini table  --dist bernoulli:2/5 --lambda 1/2 --n-max 4 [--r 2]
//   fubini verify --suite all
//   fubini series --dist gamma:1,1 --lambda 1/2 --order 6 --x 1
//   fubini mc     --dist poisson:2 --k 3 --n 4 --lambda 1/2 --samples 1000000 --seed 42
//
// Exit codes: 0 success, 1 check failure, 2 usage or parse error.

#include "fubini/identity_suite.hpp"
#include "fubini/monte_carlo.hpp"
#include "fubini/probabilistic.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

using fubini::Distribution;
using fubini::Lambda;
using fubini::Polynomial;
using fubini::Rational;
using Json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Rational parse_rational_flag(const std::string& flag, const std::string& text)
{
    try {
        return Rational::parse(text);
    } catch (const std::exception& e) {
        throw UsageError(flag + ": " + e.what());
    }
}

Distribution parse_dist_flag(const std::string& text)
{
    try {
        return Distribution::parse(text);
    } catch (const std::exception& e) {
        throw UsageError("--dist: " + std::string(e.what()));
    }
}

Json coefficient_list(const Polynomial& p)
{
    Json out = Json::array();
    for (const auto& c : p.coefficients()) {
        out.push_back(c.to_string());
    }
    if (out.empty()) {
        out.push_back("0");
    }
    return out;
}

std::string csv_quote(const std::string& field)
{
    std::string out = "\"";
    for (char ch : field) {
        out += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    }
    return out + "\"";
}

std::string join(const Json& list, const char* sep)
{
    std::string out;
    for (std::size_t i = 0; i < list.size(); ++i) {
        out += (i ? sep : "") + list[i].get<std::string>();
    }
    return out;
}

struct OutputOptions {
    std::string format = "json";
    std::string path;
};

void add_output_flags(CLI::App* cmd, OutputOptions& out)
{
    cmd->add_option("--format", out.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--out", out.path, "output file (default stdout)");
}

void emit(const OutputOptions& opts, const std::string& text)
{
    if (opts.path.empty()) {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream file(opts.path, std::ios::binary);
    if (!file) {
        throw UsageError("cannot open output file '" + opts.path + "'");
    }
    file << text;
}

std::string json_text(const Json& doc) { return doc.dump(2) + "\n"; }

// --- table -----------------------------------------------------------------

struct TableOptions {
    std::string dist;
    std::string lambda = "0";
    long n_max = 10;
    long r = 0;
    OutputOptions out;
};

int run_table(const TableOptions& o)
{
    const auto dist = parse_dist_flag(o.dist);
    const Lambda lambda(parse_rational_flag("--lambda", o.lambda));
    if (o.n_max < 0) {
        throw UsageError("--n-max must be >= 0");
    }
    if (o.r < 0) {
        throw UsageError("--r must be >= 1");
    }
    const long order = o.r == 0 ? 1 : o.r;

    fubini::ProbabilisticModel model(dist, lambda);
    Json params {{"dist", dist.spec()}, {"lambda", lambda.value.to_string()}, {"n_max", o.n_max}};
    if (o.r != 0) {
        params["r"] = order;
    }
    Json rows = Json::array();
    for (long n = 0; n <= o.n_max; ++n) {
        const auto& poly = model.fubini_poly_order(n, order);
        rows.push_back(
            {{"n", n}, {"coeffs", coefficient_list(poly)}, {"value_at_1", fubini::poly_eval(poly, Rational(1)).to_string()}});
    }

    if (o.out.format == "csv") {
        std::ostringstream csv;
        csv << "n,coeffs,value_at_1\n";
        for (const auto& row : rows) {
            csv << row["n"].get<long>() << ',' << csv_quote(join(row["coeffs"], ",")) << ','
                << row["value_at_1"].get<std::string>() << '\n';
        }
        emit(o.out, csv.str());
    } else {
        emit(o.out, json_text({{"command", "table"}, {"params", params}, {"rows", rows}}));
    }
    return kExitOk;
}

// --- verify ----------------------------------------------------------------

struct VerifyOptions {
    std::vector<std::string> suite {"all"};
    std::vector<std::string> dists;
    std::vector<std::string> lambdas;
    std::vector<std::string> x_points;
    long n_min = -1;
    long n_max = -1;
    long r_min = -1;
    long r_max = -1;
    int order = -1;
    long depth = -1;
    unsigned threads = 1;
    OutputOptions out;
};

std::vector<std::string> split_list(const std::vector<std::string>& values, char sep)
{
    std::vector<std::string> out;
    for (const auto& v : values) {
        std::stringstream ss(v);
        std::string item;
        while (std::getline(ss, item, sep)) {
            if (!item.empty()) {
                out.push_back(item);
            }
        }
    }
    return out;
}

fubini::CheckConfig build_config(const VerifyOptions& o)
{
    auto cfg = fubini::CheckConfig::defaults();
    // Distribution specs contain commas, so repeated flags or ';' separate them.
    if (!o.dists.empty()) {
        cfg.dists.clear();
        for (const auto& d : split_list(o.dists, ';')) {
            cfg.dists.push_back(parse_dist_flag(d));
        }
    }
    if (!o.lambdas.empty()) {
        cfg.lambdas.clear();
        for (const auto& l : split_list(o.lambdas, ',')) {
            cfg.lambdas.push_back(parse_rational_flag("--lambda", l));
        }
    }
    if (!o.x_points.empty()) {
        cfg.x_points.clear();
        for (const auto& x : split_list(o.x_points, ',')) {
            cfg.x_points.push_back(parse_rational_flag("--x", x));
        }
    }
    if (o.n_max >= 0) {
        cfg.n_max = o.n_max;
        cfg.coefficient_depth = 2 * o.n_max + 6;
    }
    if (o.n_min >= 0) {
        cfg.n_min = o.n_min;
    }
    if (o.r_max >= 0) {
        cfg.r_max = o.r_max;
    }
    if (o.r_min >= 0) {
        cfg.r_min = o.r_min;
    }
    if (o.order >= 0) {
        cfg.series_order = o.order;
    }
    if (o.depth >= 0) {
        cfg.coefficient_depth = o.depth;
    }
    try {
        cfg.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    return cfg;
}

std::vector<fubini::IdentityId> select_identities(const std::vector<std::string>& names)
{
    std::vector<fubini::IdentityId> ids;
    for (const auto& name : split_list(names, ',')) {
        if (name == "all") {
            for (const auto& entry : fubini::kIdentityNames) {
                ids.push_back(entry.first);
            }
            continue;
        }
        const auto id = fubini::parse_identity(name);
        if (!id) {
            throw UsageError("unknown identity '" + name + "'");
        }
        ids.push_back(*id);
    }
    if (ids.empty()) {
        throw UsageError("--suite selects no identities");
    }
    return ids;
}

Json report_json(const fubini::CheckReport& r)
{
    Json row {{"id", std::string(fubini::to_string(r.id))},
              {"status", std::string(fubini::to_string(r.status))},
              {"cases", r.cases}};
    if (r.counterexample) {
        Json params = Json::object();
        for (const auto& [key, value] : r.counterexample->params) {
            params[key] = value;
        }
        row["counterexample"] = {{"params", params},
                                 {"lhs", coefficient_list(r.counterexample->lhs)},
                                 {"rhs", coefficient_list(r.counterexample->rhs)}};
    } else {
        row["counterexample"] = nullptr;
    }
    return row;
}

int run_verify(const VerifyOptions& o)
{
    const auto ids = select_identities(o.suite);
    const auto cfg = build_config(o);
    const auto reports = fubini::run_identities(ids, cfg, o.threads);
    const bool passed = fubini::suite_passed(reports);

    Json rows = Json::array();
    for (const auto& r : reports) {
        rows.push_back(report_json(r));
    }

    if (o.out.format == "csv") {
        std::ostringstream csv;
        csv << "id,status,cases,params,lhs,rhs\n";
        for (const auto& row : rows) {
            csv << row["id"].get<std::string>() << ',' << row["status"].get<std::string>() << ','
                << row["cases"].get<long>() << ',';
            if (row["counterexample"].is_null()) {
                csv << ",,\n";
                continue;
            }
            std::string params;
            for (const auto& [key, value] : row["counterexample"]["params"].items()) {
                params += (params.empty() ? "" : ";") + key + "=" + value.get<std::string>();
            }
            csv << csv_quote(params) << ',' << csv_quote(join(row["counterexample"]["lhs"], ",")) << ','
                << csv_quote(join(row["counterexample"]["rhs"], ",")) << '\n';
        }
        emit(o.out, csv.str());
    } else {
        Json lambdas = Json::array();
        for (const auto& l : cfg.lambdas) {
            lambdas.push_back(l.to_string());
        }
        Json dists = Json::array();
        for (const auto& d : cfg.dists) {
            dists.push_back(d.spec());
        }
        Json xs = Json::array();
        for (const auto& x : cfg.x_points) {
            xs.push_back(x.to_string());
        }
        Json params {{"lambdas", lambdas}, {"dists", dists},           {"x_points", xs},
                     {"n_min", cfg.n_min}, {"n_max", cfg.n_max},      {"r_min", cfg.r_min},
                     {"r_max", cfg.r_max}, {"order", cfg.series_order}, {"depth", cfg.coefficient_depth}};
        emit(o.out, json_text({{"command", "verify"},
                               {"params", params},
                               {"rows", rows},
                               {"summary", {{"reports", reports.size()}, {"passed", passed}}}}));
    }
    return passed ? kExitOk : kExitCheckFailed;
}

// --- series ----------------------------------------------------------------

struct SeriesOptions {
    std::string dist;
    std::string lambda = "0";
    int order = 12;
    std::string x = "1";
    OutputOptions out;
};

int run_series(const SeriesOptions& o)
{
    const auto dist = parse_dist_flag(o.dist);
    const Lambda lambda(parse_rational_flag("--lambda", o.lambda));
    const Rational x = parse_rational_flag("--x", o.x);
    if (o.order < 0) {
        throw UsageError("--order must be >= 0");
    }
    fubini::ProbabilisticModel model(dist, lambda);
    const auto shifted = model.mgf_series(o.order) - fubini::TruncatedSeries::one(o.order);
    const auto gf = fubini::series_reciprocal(fubini::TruncatedSeries::one(o.order) - x * shifted);

    Json rows = Json::array();
    for (int n = 0; n <= o.order; ++n) {
        rows.push_back({{"n", n}, {"value", gf.egf_coeff(static_cast<std::size_t>(n)).to_string()}});
    }
    if (o.out.format == "csv") {
        std::ostringstream csv;
        csv << "n,value\n";
        for (const auto& row : rows) {
            csv << row["n"].get<int>() << ',' << row["value"].get<std::string>() << '\n';
        }
        emit(o.out, csv.str());
    } else {
        Json params {{"dist", dist.spec()}, {"lambda", lambda.value.to_string()}, {"order", o.order}, {"x", x.to_string()}};
        emit(o.out, json_text({{"command", "series"}, {"params", params}, {"rows", rows}}));
    }
    return kExitOk;
}

// --- mc --------------------------------------------------------------------

struct McOptions {
    std::string dist;
    long k = 1;
    long n = 1;
    std::string lambda = "0";
    long samples = 1000000;
    std::uint64_t seed = 42;
    OutputOptions out;
};

int run_mc(const McOptions& o)
{
    const auto dist = parse_dist_flag(o.dist);
    const Lambda lambda(parse_rational_flag("--lambda", o.lambda));
    if (o.samples < fubini::mc::kMinSamples) {
        throw UsageError("--samples must be >= " + std::to_string(fubini::mc::kMinSamples));
    }
    if (o.k < 0 || o.n < 0) {
        throw UsageError("--k and --n must be >= 0");
    }
    const auto est = fubini::mc::estimate_sum_degenerate_moment(dist, o.k, o.n, lambda, o.samples, o.seed);
    const bool ok = std::abs(est.z_score) <= fubini::mc::kZThreshold;

    if (o.out.format == "csv") {
        std::ostringstream csv;
        csv.precision(17);
        csv << "estimate,std_error,exact,exact_value,z_score,samples,seed\n";
        csv << est.estimate << ',' << est.std_error << ',' << est.exact.to_string() << ',' << est.exact.to_double() << ','
            << est.z_score << ',' << est.samples << ',' << est.seed << '\n';
        emit(o.out, csv.str());
    } else {
        Json params {{"dist", dist.spec()}, {"k", o.k},         {"n", o.n}, {"lambda", lambda.value.to_string()},
                     {"samples", o.samples}, {"seed", o.seed}};
        Json row {{"estimate", est.estimate},
                  {"std_error", est.std_error},
                  {"exact", est.exact.to_string()},
                  {"exact_value", est.exact.to_double()},
                  {"z_score", std::isfinite(est.z_score) ? Json(est.z_score) : Json(nullptr)},
                  {"samples", est.samples},
                  {"seed", est.seed},
                  {"within_tolerance", ok}};
        emit(o.out, json_text({{"command", "mc"}, {"params", params}, {"rows", Json::array({row})}}));
    }
    return ok ? kExitOk : kExitCheckFailed;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app {"Exact probabilistic degenerate Fubini polynomials"};
    app.require_subcommand(1);

    TableOptions table;
    auto* table_cmd = app.add_subcommand("table", "coefficient table of F^Y_{n,lambda} or its order-r variant");
    table_cmd->add_option("--dist", table.dist, "distribution spec")->required();
    table_cmd->add_option("--lambda", table.lambda, "lambda as p/q");
    table_cmd->add_option("--n-max", table.n_max, "largest n");
    table_cmd->add_option("--r", table.r, "order r >= 1");
    add_output_flags(table_cmd, table.out);

    VerifyOptions verify;
    auto* verify_cmd = app.add_subcommand("verify", "run identity checks");
    verify_cmd->add_option("--suite", verify.suite, "identity names (comma separated) or all");
    verify_cmd->add_option("--dists", verify.dists, "distribution specs (repeat flag or separate with ';')");
    verify_cmd->add_option("--lambda", verify.lambdas, "lambda grid (comma separated)");
    verify_cmd->add_option("--x", verify.x_points, "x points (comma separated)");
    verify_cmd->add_option("--n-min", verify.n_min, "smallest n");
    verify_cmd->add_option("--n-max", verify.n_max, "largest n");
    verify_cmd->add_option("--r-min", verify.r_min, "smallest r");
    verify_cmd->add_option("--r", verify.r_max, "largest r");
    verify_cmd->add_option("--order", verify.order, "series truncation order N");
    verify_cmd->add_option("--depth", verify.depth, "coefficient depth M for infinite-series identities");
    verify_cmd->add_option("--threads", verify.threads, "worker threads");
    add_output_flags(verify_cmd, verify.out);

    SeriesOptions series;
    auto* series_cmd = app.add_subcommand("series", "t^n/n! coefficients of the generating function at x");
    series_cmd->add_option("--dist", series.dist, "distribution spec")->required();
    series_cmd->add_option("--lambda", series.lambda, "lambda as p/q");
    series_cmd->add_option("--order", series.order, "truncation order N");
    series_cmd->add_option("--x", series.x, "evaluation point x");
    add_output_flags(series_cmd, series.out);

    McOptions mc;
    auto* mc_cmd = app.add_subcommand("mc", "Monte Carlo estimate of E[(S_k)_{n,lambda}]");
    mc_cmd->add_option("--dist", mc.dist, "distribution spec")->required();
    mc_cmd->add_option("--k", mc.k, "number of iid summands");
    mc_cmd->add_option("--n", mc.n, "degree n");
    mc_cmd->add_option("--lambda", mc.lambda, "lambda as p/q");
    mc_cmd->add_option("--samples", mc.samples, "sample count (>= 1000)");
    mc_cmd->add_option("--seed", mc.seed, "generator seed");
    add_output_flags(mc_cmd, mc.out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*table_cmd) {
            return run_table(table);
        }
        if (*verify_cmd) {
            return run_verify(verify);
        }
        if (*series_cmd) {
            return run_series(series);
        }
        if (*mc_cmd) {
            return run_mc(mc);
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitCheckFailed;
    }
    return kExitUsage;
}
