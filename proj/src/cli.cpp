#include "modal/cli.hpp"

#include "modal/clustering.hpp"
#include "modal/csv.hpp"
#include "modal/direct.hpp"
#include "modal/error.hpp"
#include "modal/gmm.hpp"
#include "modal/indirect.hpp"
#include "modal/kde.hpp"
#include "modal/level_set.hpp"
#include "modal/modes.hpp"
#include "modal/nn_density.hpp"
#include "modal/regression.hpp"
#include "modal/simulate.hpp"
#include "modal/sizer.hpp"
#include "modal/svg.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>

namespace modal {

namespace fs = std::filesystem;

namespace {

//! Raised for flag values that parse but make no sense; maps to exit 1.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Flags {
    std::string input;
    std::string columns;
    std::string method;
    std::string bandwidth;
    std::optional<std::size_t> k;
    std::optional<double> p;
    std::optional<double> a;
    std::string grid;
    std::uint64_t seed = 0;
    std::string out;
    std::string format = "json";
};

// Extension -> file content, in a fixed order.
using Artifacts = std::map<std::string, std::string>;

template <typename T>
std::vector<T> parse_list(const std::string& text, const char* flag)
{
    std::vector<T> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t comma = std::min(text.find(',', pos), text.size());
        const std::string item = text.substr(pos, comma - pos);
        T value{};
        const auto [end, ec] = std::from_chars(item.data(), item.data() + item.size(), value);
        if (item.empty() || ec != std::errc() || end != item.data() + item.size())
            throw UsageError(std::string("bad value '") + item + "' in " + flag);
        out.push_back(value);
        pos = comma + 1;
    }
    return out;
}

std::vector<double> positive_list(const std::string& text, const char* flag)
{
    auto v = parse_list<double>(text, flag);
    for (double x : v) {
        if (!(x > 0.0) || !std::isfinite(x))
            throw UsageError(std::string(flag) + " values must be positive");
    }
    return v;
}

std::vector<double> log_spaced(double hi, double lo, std::size_t count)
{
    std::vector<double> out(count);
    for (std::size_t j = 0; j < count; ++j) {
        const double t = count == 1 ? 0.0 : static_cast<double>(j) / static_cast<double>(count - 1);
        out[j] = hi * std::pow(lo / hi, t);
    }
    return out;
}

std::vector<double> linear_grid(double lo, double hi, std::size_t count)
{
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i)
        out[i] = count == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
    return out;
}

std::size_t grid_count(const Flags& f, std::size_t fallback)
{
    if (f.grid.empty())
        return fallback;
    const auto v = parse_list<std::size_t>(f.grid, "--grid");
    if (v.size() != 1 || v[0] < 2)
        throw UsageError("--grid must be a single count of at least 2");
    return v[0];
}

Sample load_input(const Flags& f)
{
    if (f.input.empty())
        throw UsageError("--input is required");
    if (!fs::exists(f.input))
        throw DataError("input file '" + f.input + "' does not exist");
    std::vector<std::size_t> cols;
    if (!f.columns.empty()) {
        try {
            cols = parse_columns(f.columns);
        } catch (const InvalidArgument& e) {
            throw UsageError(e.what());
        }
    }
    return load_csv(f.input, cols);
}

Point bandwidth_for(const Flags& f, const Sample& s)
{
    if (f.bandwidth.empty())
        return normal_reference_bandwidth(s);
    const auto v = positive_list(f.bandwidth, "--bandwidth");
    if (v.size() == 1)
        return Point::Constant(static_cast<Eigen::Index>(s.dim()), v[0]);
    if (v.size() != s.dim())
        throw UsageError("--bandwidth needs one value or one per column");
    return Eigen::Map<const Point>(v.data(), static_cast<Eigen::Index>(v.size()));
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

Artifacts run_mode(const Flags& f)
{
    const Sample s = load_input(f);
    const std::string& m = f.method;
    auto need_k = [&] {
        if (!f.k)
            throw UsageError("--method " + m + " needs --k");
        return *f.k;
    };
    if (m == "chernoff") {
        if (!f.a)
            throw UsageError("--method chernoff needs --a");
        return {{"json", dump(to_json(chernoff_mode(s, *f.a)))}};
    }
    if (m == "dalenius-venter" || m == "dv")
        return {{"json", dump(to_json(dalenius_venter_mode(s, need_k())))}};
    if (m == "hsm")
        return {{"json", dump(to_json(robertson_cryer_mode(s, 0.5)))}};
    if (m == "robertson-cryer" || m == "rc")
        return {{"json", dump(to_json(robertson_cryer_mode(s, f.p.value_or(0.5))))}};
    if (m == "grenander") {
        if (!f.p)
            throw UsageError("--method grenander needs --p");
        return {{"json", dump(to_json(grenander_mode(s, need_k(), *f.p)))}};
    }
    if (m == "kernel") {
        const KernelDensityModel model(s, bandwidth_for(f, s));
        return {{"json", dump(to_json(kernel_mode(model, SearchGrid{grid_count(f, 128), 3.0}), "kernel"))}};
    }
    if (m == "sample-point") {
        const KernelDensityModel model(s, bandwidth_for(f, s));
        return {{"json", dump(to_json(sample_point_mode(model), "sample-point"))}};
    }
    if (m == "nn") {
        const NearestNeighborModel model(s, need_k());
        return {{"json", dump(to_json(sample_point_mode(model), "nn"))}};
    }
    throw UsageError("unknown --method '" + m +
                     "' (chernoff, dalenius-venter, hsm, robertson-cryer, grenander, kernel, sample-point, nn)");
}

Artifacts run_tree(const Flags& f)
{
    const Sample s = load_input(f);
    std::vector<double> hs;
    const auto explicit_h = f.bandwidth.empty() ? std::vector<double>{} : positive_list(f.bandwidth, "--bandwidth");
    if (explicit_h.size() > 1) {
        hs = explicit_h;
    } else {
        const double top = explicit_h.empty() ? 2.0 * normal_reference_bandwidth(s)(0) : explicit_h[0];
        hs = log_spaced(top, top / 32.0, f.k.value_or(25));
    }
    ModeTreeOptions opts;
    opts.resolution = grid_count(f, opts.resolution);
    const ModeTree tree = mode_tree(s, hs, opts);
    return {{"json", dump(to_json(tree))}, {"svg", svg::render(tree)}};
}

Artifacts run_persist(const Flags& f)
{
    const Sample s = load_input(f);
    if (s.dim() > 2)
        throw DataError("persistence needs one or two columns");
    const Point h = bandwidth_for(f, s);
    const KernelDensityModel model(s, h);
    const EvalGrid grid = EvalGrid::evaluate(model, covering_axes(s, 3.0 * h, grid_count(f, s.dim() == 1 ? 256 : 64)));
    const ClusterTree tree = level_set_tree(grid);
    nlohmann::json j{{"bandwidth", std::vector<double>(h.data(), h.data() + h.size())},
                     {"diagram", to_json(tree.pairs)},
                     {"tree", to_json(tree)}};
    return {{"json", dump(j)}, {"svg", svg::render(tree.pairs)}};
}

Artifacts run_sizer(const Flags& f)
{
    const Sample s = load_input(f);
    const auto v = s.values();
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    std::vector<double> hs;
    if (!f.bandwidth.empty()) {
        hs = positive_list(f.bandwidth, "--bandwidth");
    } else {
        const double ref = normal_reference_bandwidth(s)(0);
        hs = log_spaced(4.0 * ref, ref / 10.0, f.k.value_or(40));
    }
    const double confidence = f.p.value_or(0.95);
    if (!(confidence > 0.0 && confidence < 1.0))
        throw UsageError("--p (confidence level) must lie in (0, 1)");
    const SizerMap map = sizer_map(s, linear_grid(*lo, *hi, grid_count(f, 200)), hs, confidence);
    return {{"json", dump(to_json(map))}, {"svg", svg::render(map)}};
}

Artifacts run_cluster(const Flags& f)
{
    const Sample s = load_input(f);
    const std::string m = f.method.empty() ? "modal" : f.method;
    nlohmann::json j{{"method", m}};
    Partition part;
    if (m == "modal") {
        const Point h = bandwidth_for(f, s);
        const KernelDensityModel model(s, h);
        part = modal_partition(model, s);
        j["bandwidth"] = std::vector<double>(h.data(), h.data() + h.size());
    } else if (m == "parametric" || m == "gmm-modal") {
        const SeedSpec seed{f.seed, 0};
        const GaussianMixtureModel gmm = f.k ? fit_gmm_em(s, *f.k, seed) : select_gmm_bic(s, 6, seed);
        part = m == "parametric" ? parametric_partition(gmm, s) : gmm_modal_partition(gmm, s);
        j["model"] = to_json(gmm);
    } else {
        throw UsageError("unknown --method '" + m + "' (modal, parametric, gmm-modal)");
    }
    j["partition"] = to_json(part);
    return {{"json", dump(j)}, {"svg", svg::render(part, s)}};
}

Artifacts run_modalreg(const Flags& f)
{
    const Sample s = load_input(f);
    if (s.dim() != 2)
        throw DataError("modal regression needs exactly two columns (x, y)");
    const Point h = bandwidth_for(f, s);
    const ConditionalModel model(s, h(0), h(1));
    auto xs = s.column(0);
    std::sort(xs.begin(), xs.end());
    const auto quantile = [&](double q) { return xs[static_cast<std::size_t>(q * static_cast<double>(xs.size() - 1))]; };
    const auto grid = linear_grid(quantile(0.025), quantile(0.975), grid_count(f, 50));
    const ModalCurveSet curves = modal_regression_curves(model, grid);
    nlohmann::json j = to_json(curves);
    j["bandwidth"] = {h(0), h(1)};
    return {{"json", dump(j)}, {"csv", to_csv(curves)}, {"svg", svg::render(curves, s)}};
}

Artifacts run_simulate(const Flags& f)
{
    const MixtureSpec dist = presets::by_name(f.input.empty() ? "gauss" : f.input);
    EstimatorSpec est;
    est.estimator = EstimatorSpec::parse(f.method.empty() ? "kernel" : f.method);
    if (!f.bandwidth.empty()) {
        const auto c = positive_list(f.bandwidth, "--bandwidth");
        if (c.size() != 1)
            throw UsageError("--bandwidth takes the single constant c of h = c n^(-1/7)");
        est.bandwidth_constant = c[0];
    }
    const auto n_grid =
        parse_list<std::size_t>(f.grid.empty() ? std::string("1000,2000,4000,8000,16000") : f.grid, "--grid");
    const RateReport report = simulate_rate(est, dist, n_grid, f.k.value_or(200), SeedSpec{f.seed, 0});
    nlohmann::json j = to_json(report);
    j["distribution"] = f.input.empty() ? "gauss" : f.input;
    j["estimator"] = f.method.empty() ? "kernel" : f.method;
    j["bandwidth_constant"] = est.bandwidth_constant;
    j["seed"] = f.seed;
    return {{"json", dump(j)}};
}

void add_common(CLI::App* cmd, Flags& f)
{
    cmd->add_option("--out", f.out, "Output directory (default: standard output)");
    cmd->add_option("--format", f.format, "Standard-output format: json, svg or csv")
        ->check(CLI::IsMember({"json", "svg", "csv"}));
}

} // namespace

void write_atomic(const std::string& path, const std::string& content)
{
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw DataError("cannot write '" + tmp.string() + "'");
        out << content;
        out.close();
        if (!out)
            throw DataError("cannot write '" + tmp.string() + "'");
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw DataError("cannot replace '" + path + "'");
    }
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Mode estimation, multimodality diagnostics, modal clustering and modal regression", "modal"};
    app.require_subcommand(1);
    Flags f;

    auto* mode = app.add_subcommand("mode", "Estimate the mode of a sample");
    mode->add_option("--input", f.input, "CSV file")->required();
    mode->add_option("--columns", f.columns, "Column selector, e.g. 0,2");
    mode->add_option("--method", f.method,
                     "chernoff, dalenius-venter, hsm, robertson-cryer, grenander, kernel, sample-point, nn")
        ->required();
    mode->add_option("--bandwidth", f.bandwidth, "Kernel bandwidth (one value or one per column)");
    mode->add_option("--k", f.k, "Window size (dalenius-venter, grenander) or neighbor rank (nn)");
    mode->add_option("--p", f.p, "Window proportion (robertson-cryer) or power (grenander)");
    mode->add_option("--a", f.a, "Half-width of the chernoff window");
    mode->add_option("--grid", f.grid, "Search-grid resolution (kernel)");
    add_common(mode, f);

    auto* tree = app.add_subcommand("tree", "Mode tree across bandwidths");
    tree->add_option("--input", f.input, "CSV file")->required();
    tree->add_option("--columns", f.columns, "Column selector");
    tree->add_option("--bandwidth", f.bandwidth, "Largest bandwidth, or an explicit comma list");
    tree->add_option("--k", f.k, "Number of bandwidths (default 25)");
    tree->add_option("--grid", f.grid, "Evaluation-grid resolution (default 512)");
    add_common(tree, f);

    auto* persist = app.add_subcommand("persist", "Cluster tree and persistence diagram of a kernel estimate");
    persist->add_option("--input", f.input, "CSV file")->required();
    persist->add_option("--columns", f.columns, "Column selector");
    persist->add_option("--bandwidth", f.bandwidth, "Kernel bandwidth");
    persist->add_option("--grid", f.grid, "Grid nodes per axis");
    add_common(persist, f);

    auto* sizer = app.add_subcommand("sizer", "SiZer significance map");
    sizer->add_option("--input", f.input, "CSV file")->required();
    sizer->add_option("--columns", f.columns, "Column selector");
    sizer->add_option("--bandwidth", f.bandwidth, "Explicit comma list of bandwidths");
    sizer->add_option("--k", f.k, "Number of bandwidths (default 40)");
    sizer->add_option("--p", f.p, "Confidence level (default 0.95)");
    sizer->add_option("--grid", f.grid, "Number of x locations (default 200)");
    add_common(sizer, f);

    auto* cluster = app.add_subcommand("cluster", "Modal or mixture-model clustering");
    cluster->add_option("--input", f.input, "CSV file")->required();
    cluster->add_option("--columns", f.columns, "Column selector");
    cluster->add_option("--method", f.method, "modal, parametric or gmm-modal");
    cluster->add_option("--bandwidth", f.bandwidth, "Kernel bandwidth (modal)");
    cluster->add_option("--k", f.k, "Mixture components (default: BIC over 1..6)");
    cluster->add_option("--seed", f.seed, "Random seed for EM initialisation");
    add_common(cluster, f);

    auto* modalreg = app.add_subcommand("modalreg", "Modal regression curves");
    modalreg->add_option("--input", f.input, "CSV file")->required();
    modalreg->add_option("--columns", f.columns, "Two columns: covariate, response");
    modalreg->add_option("--bandwidth", f.bandwidth, "hx,hy or a single common value");
    modalreg->add_option("--grid", f.grid, "Number of x locations (default 50)");
    add_common(modalreg, f);

    auto* simulate = app.add_subcommand("simulate", "Monte Carlo convergence-rate study");
    simulate->add_option("--input", f.input, "Distribution preset: gauss, mw3, trimodal-sep8");
    simulate->add_option("--method", f.method, "kernel, sample-point or hsm");
    simulate->add_option("--bandwidth", f.bandwidth, "Constant c in h = c n^(-1/7)");
    simulate->add_option("--k", f.k, "Replicates per sample size (default 200)");
    simulate->add_option("--grid", f.grid, "Comma list of sample sizes");
    simulate->add_option("--seed", f.seed, "Random seed");
    add_common(simulate, f);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return exit_usage;
    }

    const std::string name = app.get_subcommands().front()->get_name();
    try {
        Artifacts artifacts;
        if (name == "mode")
            artifacts = run_mode(f);
        else if (name == "tree")
            artifacts = run_tree(f);
        else if (name == "persist")
            artifacts = run_persist(f);
        else if (name == "sizer")
            artifacts = run_sizer(f);
        else if (name == "cluster")
            artifacts = run_cluster(f);
        else if (name == "modalreg")
            artifacts = run_modalreg(f);
        else
            artifacts = run_simulate(f);

        if (f.out.empty()) {
            const auto it = artifacts.find(f.format);
            if (it == artifacts.end())
                throw UsageError("'" + name + "' has no " + f.format + " output");
            out << it->second;
            return exit_ok;
        }
        std::error_code ec;
        fs::create_directories(f.out, ec);
        if (ec)
            throw DataError("cannot create output directory '" + f.out + "'");
        for (const auto& [ext, content] : artifacts)
            write_atomic((fs::path(f.out) / (name + "." + ext)).string(), content);
        return exit_ok;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const InvalidArgument& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_data;
    }
}

} // namespace modal
