#include "modal/cli.hpp"
#include "modal/clustering.hpp"
#include "modal/direct.hpp"
#include "modal/gmm.hpp"
#include "modal/grid.hpp"
#include "modal/kde.hpp"
#include "modal/level_set.hpp"
#include "modal/mixture.hpp"
#include "modal/modes.hpp"
#include "modal/regression.hpp"
#include "modal/simulate.hpp"

#include "../oracles.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace modal;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool pass = false;
    std::string detail;
};

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

Point p1(double x) { return Point::Constant(1, x); }

double median(std::vector<double> v)
{
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

std::vector<double> linspace(double lo, double hi, std::size_t n)
{
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i)
        v[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    return v;
}

std::vector<double> random_values(Engine& eng, std::size_t n, bool ties)
{
    std::normal_distribution<double> z;
    std::uniform_int_distribution<int> small(0, 6);
    std::vector<double> v(n);
    for (auto& x : v)
        x = ties ? small(eng) * 0.5 : z(eng);
    return v;
}

Outcome direct_oracles()
{
    const auto t0 = Clock::now();
    Engine eng = make_engine({101, 0});
    std::uniform_int_distribution<std::size_t> size(1, 30);
    std::uniform_real_distribution<double> half(0.05, 1.5);
    std::size_t mismatches = 0;
    for (int rep = 0; rep < 1000; ++rep) {
        const auto v = random_values(eng, size(eng), rep % 2 == 1);
        const Sample s = Sample::from_values(v);
        const double a = half(eng);
        const auto ch = chernoff_mode(s, a);
        const auto ch_ref = oracle::chernoff(v, a);
        mismatches += (ch.window.lo != ch_ref.lo || ch.window.hi != ch_ref.hi) ? 1 : 0;
        if (v.size() >= 2) {
            const std::size_t k = 2 + static_cast<std::size_t>(rep) % (v.size() - 1);
            const auto dv = dalenius_venter_mode(s, k);
            const auto dv_ref = oracle::dalenius_venter(v, k);
            mismatches += (dv.window.lo != dv_ref.lo || dv.window.hi != dv_ref.hi) ? 1 : 0;
        }
        for (double p : {0.5, 0.34, 0.75}) {
            const auto rc = robertson_cryer_mode(s, p);
            const auto rc_ref = oracle::robertson_cryer(v, p);
            mismatches += (rc.window.lo != rc_ref.lo || rc.window.hi != rc_ref.hi) ? 1 : 0;
        }
    }
    const double t = seconds_since(t0);
    return {mismatches == 0 && t < 10.0, fmt("mismatches=%zu time=%.2fs (limit 10s)", mismatches, t)};
}

Outcome grenander_case()
{
    const auto e = grenander_mode(Sample::from_values({0, 1, 3}), 1, 1.0);
    const bool hand = e.location == 1.0 && std::abs(e.diagnostics.at("A") - 1.0 / 6.0) <= 1e-15 &&
                      std::abs(e.diagnostics.at("B") - 1.0 / 6.0) <= 1e-15;
    Engine eng = make_engine({102, 0});
    std::uniform_real_distribution<double> scale(0.1, 10.0);
    std::uniform_real_distribution<double> shift(-50.0, 50.0);
    std::size_t bad = 0;
    double worst = 0.0;
    for (int rep = 0; rep < 200; ++rep) {
        const auto v = random_values(eng, 5 + rep % 25, false);
        const Sample s = Sample::from_values(v);
        const double c = scale(eng);
        const double b = shift(eng);
        const Sample t = s.affine(c, p1(b));
        const std::size_t k = 1 + static_cast<std::size_t>(rep) % 4;
        const double power = 0.5 + rep % 4;
        const double err = std::abs(grenander_mode(t, k, power).location - (c * grenander_mode(s, k, power).location + b));
        const double tol = 1e-9 * (std::abs(b) + c * 10.0);
        worst = std::max(worst, err / tol);
        bad += err <= tol ? 0 : 1;
    }
    return {hand && bad == 0,
            fmt("theta=%.17g A=%.17g B=%.17g; affine failures=%zu/200 worst err/tol=%.3g", e.location,
                e.diagnostics.at("A"), e.diagnostics.at("B"), bad, worst)};
}

std::vector<oracle::Pair> as_tuples(const std::vector<PersistencePair>& pairs)
{
    std::vector<oracle::Pair> out;
    for (const auto& p : pairs)
        out.push_back({p.death, p.birth, p.peak_node});
    std::sort(out.begin(), out.end());
    return out;
}

Outcome persistence_oracle()
{
    const auto t0 = Clock::now();
    Engine eng = make_engine({103, 0});
    std::uniform_int_distribution<std::size_t> len(1, 64);
    std::uniform_int_distribution<std::size_t> side(1, 16);
    std::uniform_int_distribution<int> few(0, 5);
    std::uniform_real_distribution<double> cont(0.0, 1.0);
    const auto levels = [&](std::size_t n, bool discrete) {
        std::vector<double> v(n);
        for (auto& x : v)
            x = discrete ? few(eng) : cont(eng);
        return v;
    };
    std::size_t bad1 = 0;
    std::size_t bad2 = 0;
    for (int rep = 0; rep < 500; ++rep) {
        const std::size_t n = len(eng);
        const auto v = levels(n, rep % 2 == 0);
        bad1 += as_tuples(persistence_diagram(EvalGrid::from_levels(v))) == oracle::persistence(v, {n}) ? 0 : 1;
    }
    for (int rep = 0; rep < 100; ++rep) {
        const std::size_t rows = side(eng);
        const std::size_t cols = side(eng);
        const auto v = levels(rows * cols, rep % 2 == 0);
        bad2 += as_tuples(persistence_diagram(EvalGrid::from_levels_2d(rows, cols, v))) ==
                        oracle::persistence(v, {cols, rows})
                    ? 0
                    : 1;
    }
    const double t = seconds_since(t0);
    return {bad1 == 0 && bad2 == 0 && t < 60.0,
            fmt("1-d mismatches=%zu/500 2-d mismatches=%zu/100 time=%.2fs (limit 60s)", bad1, bad2, t)};
}

Outcome silverman_monotone()
{
    std::size_t violations = 0;
    std::size_t refined = 0;
    for (std::uint64_t rep = 0; rep < 50; ++rep) {
        const auto draw = sample_mixture(presets::mw3(), 100, {104, rep});
        const auto hs = [] {
            std::vector<double> h(30);
            for (int j = 0; j < 30; ++j)
                h[j] = 0.02 * std::pow(100.0, j / 29.0);
            return h;
        }();
        const auto counts_at = [&](std::size_t resolution) {
            const auto axes = covering_axes(draw.sample, p1(3.0 * hs.back()), resolution);
            std::vector<std::size_t> c;
            for (double h : hs)
                c.push_back(count_modes(KernelDensityModel(draw.sample, h), axes, {false}).count);
            return c;
        };
        const auto monotone = [](const std::vector<std::size_t>& c) {
            return std::adjacent_find(c.begin(), c.end(), std::less<>()) == c.end();
        };
        auto c = counts_at(2048);
        if (!monotone(c)) {
            ++refined;
            c = counts_at(4096);
        }
        violations += monotone(c) ? 0 : 1;
    }
    return {violations == 0, fmt("samples with violations=%zu/50 (refined %zu)", violations, refined)};
}

Outcome romano_rate()
{
    const auto t0 = Clock::now();
    EstimatorSpec est;
    const std::vector<std::size_t> ns{1000, 2000, 4000, 8000, 16000};
    const auto r = simulate_rate(est, presets::gauss(), ns, 200, {105, 0});
    const double t = seconds_since(t0);
    return {r.slope >= -0.40 && r.slope <= -0.18 && t < 600.0,
            fmt("slope=%.4f (se %.4f, theory %.4f) target [-0.40,-0.18] time=%.1fs (limit 600s)", r.slope,
                r.slope_se, r.theoretical_slope, t)};
}

Outcome romano_variance()
{
    EstimatorSpec est;
    // The rate fit needs two sizes; only the larger one is judged.
    const auto r = simulate_rate(est, presets::gauss(), {50000, 100000}, 300, {106, 0});
    // Gaussian kernel: R(K') = 1 / (4 sqrt(pi)); N(0,1) at 0: f / f''^2 = 1 / phi(0).
    const double expected = std::sqrt(2.0 * std::numbers::pi) / (4.0 * std::sqrt(std::numbers::pi));
    const double v = r.scaled_variance[1];
    const double rel = v / expected - 1.0;
    return {std::abs(rel) <= 0.30 && std::abs(r.v_k2 - expected) <= 1e-12,
            fmt("empirical=%.4f analytic=%.5f relative error=%+.1f%% (limit 30%%) failures=%zu", v, expected,
                100.0 * rel, r.failures[1])};
}

Outcome modal_clusters()
{
    std::size_t ok = 0;
    double worst = 1.0;
    std::string rs;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto draw = sample_mixture(presets::trimodal_sep8(), 3000, {107, seed});
        const KernelDensityModel m(draw.sample, normal_reference_bandwidth(draw.sample));
        const Partition p = modal_partition(m, draw.sample);
        const double agree = label_agreement(p.labels, draw.labels);
        worst = std::min(worst, agree);
        rs += std::to_string(p.r);
        ok += (p.r == 3 && agree >= 0.99) ? 1 : 0;
    }
    return {ok == 10, fmt("seeds passing=%zu/10 r per seed=%s worst agreement=%.4f", ok, rs.c_str(), worst)};
}

Outcome mixture_merge()
{
    const MixtureSpec close{{0.5, 0.5}, {p1(0.0), p1(1.0)},
                            {Eigen::MatrixXd::Identity(1, 1), Eigen::MatrixXd::Identity(1, 1)}};
    std::size_t ok = 0;
    std::string rs;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto draw = sample_mixture(close, 1000, {108, seed});
        const auto fit = fit_gmm_em(draw.sample, 2, {108, 100 + seed});
        const Partition p = gmm_modal_partition(fit, draw.sample);
        rs += std::to_string(p.r);
        ok += (fit.components() == 2 && p.r == 1) ? 1 : 0;
    }
    return {ok == 10, fmt("seeds with r=1: %zu/10 (r per seed=%s)", ok, rs.c_str())};
}

Sample skewed_regression(std::size_t n, std::uint64_t seed)
{
    const auto noise = sample_mixture(presets::mw3(), n, {109, seed});
    Engine eng = make_engine({110, seed});
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> c;
    c.reserve(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = u(eng);
        c.push_back(x);
        c.push_back(5.0 - 2.0 * x + noise.sample.at(i, 0));
    }
    return Sample(c, 2);
}

Outcome modal_vs_mean()
{
    const GaussianMixtureModel w(presets::mw3());
    const double mode_w = oracle::argmax_1d([&](double y) { return w.density(p1(y)); }, -4.0, 3.0, 700001);
    const double mean_w = presets::mw3().mean()(0);
    const auto xs = linspace(0.25, 0.75, 11);
    std::size_t ok = 0;
    double worst_modal = 0.0;
    double worst_mean = 0.0;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const Sample s = skewed_regression(10000, seed);
        const ConditionalModel m(s, 0.02, 0.04);
        CurveOptions opts;
        opts.mean_bandwidth = 0.05;
        const auto curves = modal_regression_curves(m, xs, opts);
        std::vector<double> modal_err;
        double mean_err = 0.0;
        for (std::size_t g = 0; g < xs.size(); ++g) {
            const double base = 5.0 - 2.0 * xs[g];
            modal_err.push_back(curves.global_curve[g] ? std::abs(curves.global_curve[g]->y - (base + mode_w))
                                                       : INFINITY);
            mean_err = std::max(mean_err, curves.mean_curve[g] ? std::abs(*curves.mean_curve[g] - (base + mean_w))
                                                               : INFINITY);
        }
        const double med = median(modal_err);
        worst_modal = std::max(worst_modal, med);
        worst_mean = std::max(worst_mean, mean_err);
        ok += (med <= 0.15 && mean_err <= 0.15) ? 1 : 0;
    }
    return {ok == 5, fmt("seeds passing=%zu/5 mode(W)=%.4f E(W)=%.4f worst median modal error=%.4f worst mean "
                         "error=%.4f (limit 0.15)",
                         ok, mode_w, mean_w, worst_modal, worst_mean)};
}

Outcome outlier_resistance()
{
    const std::size_t n = 5000;
    Engine eng = make_engine({111, 0});
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::normal_distribution<double> z;
    std::vector<double> clean;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = u(eng);
        clean.push_back(x);
        clean.push_back(1.0 + 2.0 * x + 0.5 * z(eng));
    }
    // Every fiftieth response is moved up by 20.
    std::vector<double> dirty = clean;
    for (std::size_t i = 0; i < n; i += 50)
        dirty[2 * i + 1] += 20.0;

    const auto xs = linspace(0.2, 0.8, 13);
    CurveOptions opts;
    opts.mean_bandwidth = 0.1;
    const auto a = modal_regression_curves(ConditionalModel(Sample(clean, 2), 0.1, 0.2), xs, opts);
    const auto b = modal_regression_curves(ConditionalModel(Sample(dirty, 2), 0.1, 0.2), xs, opts);
    std::vector<double> theta_shift;
    std::vector<double> mean_shift;
    for (std::size_t g = 0; g < xs.size(); ++g) {
        if (!a.global_curve[g] || !b.global_curve[g] || !a.mean_curve[g] || !b.mean_curve[g])
            return {false, "undefined curve value on the grid"};
        theta_shift.push_back(std::abs(b.global_curve[g]->y - a.global_curve[g]->y));
        mean_shift.push_back(std::abs(*b.mean_curve[g] - *a.mean_curve[g]));
    }
    const double dt = median(theta_shift);
    const double dm = median(mean_shift);
    return {dt <= 0.05 && dm >= 0.2,
            fmt("median modal shift=%.4f (limit 0.05) median mean shift=%.4f (need >= 0.2)", dt, dm)};
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome cli_determinism()
{
    const fs::path dir = fs::temp_directory_path() / "modal_acceptance_cli";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const auto write = [&](const std::string& name, const Sample& s) {
        std::ofstream out(dir / name);
        out.precision(17);
        for (std::size_t i = 0; i < s.size(); ++i) {
            for (std::size_t j = 0; j < s.dim(); ++j)
                out << (j ? "," : "") << s.at(i, j);
            out << "\n";
        }
        return (dir / name).string();
    };
    const auto one = write("one.csv", sample_mixture(presets::mw3(), 300, {112, 0}).sample);
    const auto two = write("two.csv", sample_mixture(presets::trimodal_sep8(), 300, {112, 1}).sample);
    const auto reg = write("reg.csv", skewed_regression(1000, 9));

    std::vector<std::vector<std::string>> commands;
    const std::vector<std::vector<std::string>> mode_args{
        {"chernoff", "--a", "0.3"}, {"dalenius-venter", "--k", "20"}, {"hsm"},
        {"robertson-cryer", "--p", "0.4"}, {"grenander", "--k", "10", "--p", "2"}, {"kernel"},
        {"sample-point"}, {"nn", "--k", "15"}};
    for (const auto& extra : mode_args) {
        std::vector<std::string> args{"mode", "--input", one, "--method"};
        args.insert(args.end(), extra.begin(), extra.end());
        commands.push_back(args);
    }
    commands.push_back({"tree", "--input", one});
    commands.push_back({"persist", "--input", one});
    commands.push_back({"persist", "--input", two});
    commands.push_back({"sizer", "--input", one});
    commands.push_back({"cluster", "--input", two});
    commands.push_back({"cluster", "--input", two, "--method", "parametric", "--seed", "3"});
    commands.push_back({"cluster", "--input", two, "--method", "gmm-modal", "--seed", "3"});
    commands.push_back({"modalreg", "--input", reg});
    commands.push_back({"simulate", "--input", "mw3", "--grid", "200,400", "--k", "50", "--seed", "11"});

    std::size_t artifacts = 0;
    std::size_t differing = 0;
    std::vector<std::string> failures;
    for (std::size_t c = 0; c < commands.size(); ++c) {
        std::map<std::string, std::string> runs[2];
        for (int rep = 0; rep < 2; ++rep) {
            const fs::path out = dir / ("run" + std::to_string(c) + "_" + std::to_string(rep));
            auto args = commands[c];
            args.push_back("--out");
            args.push_back(out.string());
            std::ostringstream so, se;
            if (run_cli(args, so, se) != exit_ok) {
                failures.push_back(commands[c][0] + ": " + se.str());
                continue;
            }
            runs[rep]["stdout"] = so.str();
            for (const auto& entry : fs::directory_iterator(out))
                runs[rep][entry.path().filename().string()] = slurp(entry.path());
        }
        artifacts += runs[0].size();
        for (const auto& [name, bytes] : runs[0]) {
            const auto it = runs[1].find(name);
            differing += (it == runs[1].end() || it->second != bytes) ? 1 : 0;
        }
        differing += runs[0].size() == runs[1].size() ? 0 : 1;
    }
    fs::remove_all(dir);
    std::string detail = fmt("commands=%zu artifacts compared=%zu differing=%zu", commands.size(), artifacts, differing);
    for (const auto& f : failures)
        detail += "; failed " + f;
    return {failures.empty() && differing == 0 && artifacts > commands.size(), detail};
}

} // namespace

int main(int argc, char** argv)
{
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"direct estimators vs exhaustive oracles", direct_oracles},
        {"grenander hand case and affine equivariance", grenander_case},
        {"persistence vs level-recomputation oracle", persistence_oracle},
        {"gaussian mode count non-increasing in h", silverman_monotone},
        {"kernel mode rate slope", romano_rate},
        {"kernel mode variance constant", romano_variance},
        {"modal clustering of separated gaussians", modal_clusters},
        {"close mixture components merge", mixture_merge},
        {"modal vs mean regression under skewed noise", modal_vs_mean},
        {"outlier resistance of modal regression", outlier_resistance},
        {"cli artifacts byte-identical", cli_determinism},
    };
    std::set<int> selected;
    for (int i = 1; i < argc; ++i)
        selected.insert(std::stoi(argv[i]));

    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i) + 1;
        if (!selected.empty() && !selected.contains(id))
            continue;
        const auto t0 = Clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::printf("criterion %2d %s: %s [%s] (%.1fs)\n", id, o.pass ? "PASS" : "FAIL", criteria[i].first.c_str(),
                    o.detail.c_str(), seconds_since(t0));
        std::fflush(stdout);
        failed += o.pass ? 0 : 1;
    }
    return failed == 0 ? 0 : 1;
}
