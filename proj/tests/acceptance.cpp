// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.
//
//   C1 full identity suite through the CLI (exact; < 60 s)
//   C2 classical Fubini numbers vs ordered-set-partition enumeration (exact)
//   C3 three independent routes to {n brace k}_{Y,lambda} (exact)
//   C4 generating-function oracle, n <= 12 (exact)
//   C5 corrected derivative identity and the printed-form counterexample (exact)
//   C6 Monte Carlo concordance, |z| < 5 at 10^6 samples (< 30 s each)
//   C7 ten single-entry perturbations, each caught by the suite

#include "fubini/identity_suite.hpp"
#include "fubini/probabilistic.hpp"

#include "cli_runner.hpp"
#include "oracles.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <iomanip>
#include <iostream>
#include <sstream>

using fubini::CheckConfig;
using fubini::CheckStatus;
using fubini::Distribution;
using fubini::IdentityId;
using fubini::Lambda;
using fubini::Polynomial;
using fubini::ProbabilisticModel;
using fubini::Rational;
using fubini::TruncatedSeries;
using Json = nlohmann::json;

namespace {

constexpr double kSuiteBudgetSeconds = 60.0;
constexpr double kMcBudgetSeconds = 30.0;
constexpr double kMaxAbsZ = 5.0;

struct Outcome {
    bool pass = true;
    std::string summary;
    std::vector<std::string> details;

    void fail(std::string why)
    {
        pass = false;
        details.push_back("FAIL: " + std::move(why));
    }
};

int failures = 0;

void report(const char* id, const Outcome& o)
{
    std::cout << (o.pass ? "PASS " : "FAIL ") << id << "  " << o.summary << '\n';
    for (const auto& d : o.details) {
        std::cout << "     " << d << '\n';
    }
    std::cout.flush();
    failures += o.pass ? 0 : 1;
}

double seconds_since(std::chrono::steady_clock::time_point start)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fixed(double v, int digits = 2)
{
    std::ostringstream os;
    os << std::fixed << std::setprecision(digits) << v;
    return os.str();
}

template <typename T>
std::string show(const T& v)
{
    std::ostringstream os;
    os << v;
    return os.str();
}

Json parse_or_null(const std::string& text)
{
    try {
        return Json::parse(text);
    } catch (const Json::exception&) {
        return nullptr;
    }
}

Outcome criterion_1()
{
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    const auto run = cli::run("verify --suite all", false);
    const double elapsed = seconds_since(start);
    const auto doc = parse_or_null(run.output);
    if (run.exit_code != 0) {
        o.fail("verify --suite all exited " + std::to_string(run.exit_code));
    }
    if (doc.is_null()) {
        o.fail("output is not JSON");
        return o;
    }
    int passed = 0;
    int discrepancies = 0;
    for (const auto& row : doc["rows"]) {
        const auto id = row["id"].get<std::string>();
        const auto status = row["status"].get<std::string>();
        if (id == "THM2_9_PRINTED") {
            discrepancies += status == "known-discrepancy" ? 1 : 0;
            if (status != "known-discrepancy") {
                o.fail("THM2_9_PRINTED reported " + status);
            }
        } else if (status == "pass") {
            ++passed;
        } else {
            o.fail(id + " reported " + status + ": " + row["counterexample"].dump());
        }
    }
    if (doc["rows"].size() != 28) {
        o.fail("expected 28 reports, got " + std::to_string(doc["rows"].size()));
    }
    if (passed != 27 || discrepancies != 1) {
        o.fail("expected 27 pass + 1 known-discrepancy");
    }
    if (elapsed >= kSuiteBudgetSeconds) {
        o.fail("suite took " + fixed(elapsed) + " s");
    }

    // The documented printed-form counterexample at n = 1, r = 1.
    const auto narrow = cli::run("verify --suite THM2_9_PRINTED --dists bernoulli:2/5 --lambda 1/2 "
                                 "--n-min 1 --n-max 1 --r-min 1 --r 1",
                                 false);
    const auto ndoc = parse_or_null(narrow.output);
    const Json want_lhs = Json::array({"2/5"});
    const Json want_rhs = Json::array({"2/5", "4/5"});
    if (ndoc.is_null() || ndoc["rows"].size() != 1 || ndoc["rows"][0]["status"] != "known-discrepancy"
        || ndoc["rows"][0]["counterexample"]["lhs"] != want_lhs || ndoc["rows"][0]["counterexample"]["rhs"] != want_rhs) {
        o.fail("documented n=1, r=1 counterexample not reproduced: " + narrow.output);
    } else {
        o.details.push_back("THM2_9_PRINTED at bernoulli:2/5, lambda=1/2, n=1, r=1: lhs [2/5], rhs [2/5, 4/5]");
    }
    if (!doc["rows"].empty()) {
        for (const auto& row : doc["rows"]) {
            if (row["id"] == "THM2_9_PRINTED" && !row["counterexample"].is_null()) {
                o.details.push_back("first default-grid counterexample: " + row["counterexample"].dump());
            }
        }
    }
    o.summary = "verify --suite all: " + std::to_string(passed) + " pass, " + std::to_string(discrepancies)
        + " known-discrepancy, " + std::to_string(doc["rows"].size()) + " reports, exit "
        + std::to_string(run.exit_code) + ", " + fixed(elapsed) + " s (budget " + fixed(kSuiteBudgetSeconds, 0)
        + " s, tolerance: exact)";
    return o;
}

Outcome criterion_2()
{
    Outcome o;
    const std::int64_t expected[] = {1, 1, 3, 13, 75, 541, 4683};
    ProbabilisticModel model(Distribution::parse("point:1"), Lambda(Rational(0)));
    std::string values;
    for (int n = 0; n <= 6; ++n) {
        const Rational lib = fubini::poly_eval(model.fubini_poly(n), Rational(1));
        const std::int64_t brute = oracle::ordered_set_partitions(n);
        values += (n ? ", " : "") + lib.to_string();
        if (lib != Rational(expected[n]) || brute != expected[n]) {
            o.fail("n=" + std::to_string(n) + ": library " + lib.to_string() + ", enumerator " + std::to_string(brute)
                   + ", expected " + std::to_string(expected[n]));
        }
    }
    o.summary = "F_n(1), n=0..6 at lambda=0, point:1 = " + values + " (enumerator agrees; exact)";
    return o;
}

Outcome criterion_3()
{
    Outcome o;
    const auto cfg = CheckConfig::defaults();
    long compared = 0;
    for (const auto& dist : cfg.dists) {
        for (const auto& l : cfg.lambdas) {
            ProbabilisticModel model(dist, Lambda(l));
            std::vector<Rational> moments;
            for (long i = 1; i <= 9; ++i) {
                moments.push_back(model.degenerate_moment(i));
            }
            for (long n = 0; n <= 8; ++n) {
                // Forward substitution in E[(S_k)_{n,lambda}] = sum_j C(k,j) j! {n brace j}.
                std::vector<Rational> inverted;
                for (long k = 0; k <= n; ++k) {
                    Rational rest = model.sum_degenerate_moment(k, n);
                    for (long j = 0; j < k; ++j) {
                        rest -= oracle::choose(static_cast<int>(k), static_cast<int>(j))
                            * Rational(oracle::factorial(static_cast<int>(j))) * inverted[static_cast<std::size_t>(j)];
                    }
                    inverted.push_back(rest / Rational(oracle::factorial(static_cast<int>(k))));
                }
                for (long k = 0; k <= n; ++k) {
                    const Rational alternating = model.stirling2(n, k);
                    const Rational bell = fubini::partial_bell(n, k, moments);
                    const Rational inv = inverted[static_cast<std::size_t>(k)];
                    ++compared;
                    if (alternating != bell || alternating != inv) {
                        o.fail(dist.spec() + " lambda=" + l.to_string() + " n=" + std::to_string(n) + " k="
                               + std::to_string(k) + ": " + alternating.to_string() + " / " + bell.to_string() + " / "
                               + inv.to_string());
                        return o;
                    }
                }
            }
        }
    }
    o.summary = std::to_string(compared) + " values of {n brace k}_{Y,lambda} (7 dists x 12 lambdas, n <= 8): "
        + "alternating sum = partial Bell = inversion (exact)";
    return o;
}

Outcome criterion_4()
{
    Outcome o;
    constexpr int kOrder = 12;
    const auto cfg = CheckConfig::defaults();
    long compared = 0;
    for (const auto& dist : cfg.dists) {
        for (const auto& l : cfg.lambdas) {
            ProbabilisticModel model(dist, Lambda(l));
            const auto shifted = model.mgf_series(kOrder) - TruncatedSeries::one(kOrder);
            for (const auto& x : cfg.x_points) {
                const auto gf = fubini::series_reciprocal(TruncatedSeries::one(kOrder) - x * shifted);
                for (long n = 0; n <= kOrder; ++n) {
                    const Rational series_value = gf.egf_coeff(static_cast<std::size_t>(n));
                    const Rational poly_value = fubini::poly_eval(model.fubini_poly(n), x);
                    ++compared;
                    if (series_value != poly_value) {
                        o.fail(dist.spec() + " lambda=" + l.to_string() + " x=" + x.to_string() + " n="
                               + std::to_string(n) + ": " + series_value.to_string() + " vs " + poly_value.to_string());
                        return o;
                    }
                }
            }
        }
    }
    o.summary = std::to_string(compared) + " coefficients of 1/(1 - x(E[e_lambda^Y(t)] - 1)), n <= 12, "
        + "x in {1, 1/2, -1/3}, match F^Y_{n,lambda}(x) (exact)";
    return o;
}

Outcome criterion_5()
{
    Outcome o;
    const auto cfg = CheckConfig::defaults();
    long compared = 0;
    for (const auto& dist : cfg.dists) {
        for (const auto& l : cfg.lambdas) {
            ProbabilisticModel model(dist, Lambda(l));
            for (long r = 0; r <= 3; ++r) {
                const Rational rf = fubini::factorial(r);
                for (long n = 0; n <= 8; ++n) {
                    const Polynomial lhs = fubini::poly_derivative(model.fubini_poly(n), static_cast<unsigned>(r));
                    Polynomial rhs;
                    for (long i = 0; i <= n; ++i) {
                        rhs += model.fubini_poly_order(i, r + 1) * (fubini::binomial(n, i) * model.stirling2(n - i, r));
                    }
                    rhs *= rf * rf;
                    ++compared;
                    if (lhs != rhs) {
                        o.fail(dist.spec() + " lambda=" + l.to_string() + " r=" + std::to_string(r) + " n="
                               + std::to_string(n) + ": " + show(lhs) + " vs " + show(rhs));
                        return o;
                    }
                }
            }
        }
    }

    CheckConfig narrow = CheckConfig::defaults();
    narrow.dists = {Distribution::parse("bernoulli:2/5")};
    narrow.lambdas = {Rational(1, 2)};
    narrow.n_min = narrow.n_max = 1;
    narrow.r_min = narrow.r_max = 1;
    const auto printed = fubini::check_identity(IdentityId::Thm2_9Printed, narrow);
    const bool documented = printed.status == CheckStatus::KnownDiscrepancy && printed.counterexample
        && printed.counterexample->lhs == Polynomial({Rational(2, 5)})
        && printed.counterexample->rhs == Polynomial({Rational(2, 5), Rational(4, 5)});
    if (!documented) {
        o.fail("printed form did not fail at (n,r)=(1,1) with lhs 2/5, rhs 2/5 + 4/5 x");
    }
    CheckConfig corrected_cfg = CheckConfig::defaults();
    corrected_cfg.n_max = 8;
    const auto corrected = fubini::check_identity(IdentityId::Thm2_9Corrected, corrected_cfg);
    if (corrected.status != CheckStatus::Pass) {
        o.fail("THM2_9_CORRECTED checker reported " + std::string(fubini::to_string(corrected.status)));
    }
    o.summary = std::to_string(compared) + " cases of d^r/dx^r F^Y_n = (r!)^2 sum_i C(n,i) F^(r+1,Y)_i {n-i brace r}"
        + " (r <= 3, n <= 8) hold exactly; printed form fails at n=1, r=1 (lhs 2/5, rhs 2/5 + 4/5 x)";
    return o;
}

Outcome criterion_6()
{
    Outcome o;
    const char* runs[] = {
        "mc --dist poisson:2 --k 3 --n 4 --lambda 1/2 --samples 1000000 --seed 42",
        "mc --dist bernoulli:2/5 --k 2 --n 2 --lambda 1/2 --samples 1000000 --seed 42",
        "mc --dist gamma:3/2,2 --k 2 --n 3 --lambda 1/2 --samples 1000000 --seed 42",
    };
    std::string zs;
    for (const char* args : runs) {
        const auto start = std::chrono::steady_clock::now();
        const auto run = cli::run(args, false);
        const double elapsed = seconds_since(start);
        const auto doc = parse_or_null(run.output);
        if (doc.is_null() || doc["rows"].empty() || doc["rows"][0]["z_score"].is_null()) {
            o.fail(std::string(args) + ": no z-score in output (exit " + std::to_string(run.exit_code) + ")");
            continue;
        }
        const auto& row = doc["rows"][0];
        const double z = row["z_score"].get<double>();
        o.details.push_back(std::string(args) + " -> estimate " + fixed(row["estimate"].get<double>(), 6) + ", exact "
                            + row["exact"].get<std::string>() + ", stderr " + fixed(row["std_error"].get<double>(), 6)
                            + ", z " + fixed(z, 3) + ", " + fixed(elapsed) + " s");
        zs += (zs.empty() ? "" : ", ") + fixed(z, 3);
        if (std::abs(z) >= kMaxAbsZ || run.exit_code != 0) {
            o.fail(std::string(args) + ": |z| = " + fixed(std::abs(z), 3));
        }
        if (elapsed >= kMcBudgetSeconds) {
            o.fail(std::string(args) + ": took " + fixed(elapsed) + " s");
        }
    }
    o.summary = "z-scores " + zs + " at 10^6 samples, seed 42 (tolerance |z| < 5, budget 30 s each)";
    return o;
}

Outcome criterion_7()
{
    using fubini::DistributionKind;
    using fubini::fault::Perturbation;
    using fubini::fault::Table;
    const std::vector<Perturbation> perturbations = {
        {Table::Lah, 3, 2},
        {Table::Lah, 4, 1},
        {Table::Stirling1, 3, 2},
        {Table::Stirling1, 5, 3},
        {Table::Stirling2, 4, 2},
        {Table::Stirling2, 6, 3},
        {Table::Binomial, 5, 2},
        {Table::Factorial, 4, 0},
        {Table::RawMoment, 2, 0, DistributionKind::Gamma},
        {Table::RawMoment, 3, 0, DistributionKind::Poisson},
    };
    Outcome o;
    int caught = 0;
    for (const auto& p : perturbations) {
        CheckConfig cfg = CheckConfig::defaults();
        cfg.perturbations = {p};
        std::optional<fubini::CheckReport> hit;
        for (const auto& [id, name] : fubini::kIdentityNames) {
            auto r = fubini::check_identity(id, cfg);
            if (r.status == CheckStatus::Fail) {
                hit = std::move(r);
                break;
            }
        }
        if (!hit) {
            o.fail(p.describe() + " went undetected");
            continue;
        }
        ++caught;
        std::string where;
        for (const auto& [k, v] : hit->counterexample->params) {
            where += (where.empty() ? "" : " ") + k + "=" + v;
        }
        o.details.push_back(p.describe() + " caught by " + std::string(fubini::to_string(hit->id)) + " at " + where);
    }
    o.summary = std::to_string(caught) + "/" + std::to_string(perturbations.size())
        + " single-entry perturbations (+1) caught by the default-grid suite";
    return o;
}

} // namespace

int main()
{
    std::cout << "acceptance: probabilistic degenerate Fubini polynomials\n";
    const std::pair<const char*, Outcome (*)()> criteria[] = {
        {"C1", criterion_1}, {"C2", criterion_2}, {"C3", criterion_3}, {"C4", criterion_4},
        {"C5", criterion_5}, {"C6", criterion_6}, {"C7", criterion_7},
    };
    for (const auto& [id, run] : criteria) {
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o.fail(std::string("exception: ") + e.what());
        }
        report(id, o);
    }
    std::cout << (failures == 0 ? "all criteria passed\n" : std::to_string(failures) + " criteria failed\n");
    return failures == 0 ? 0 : 1;
}
