// cusplab: batch experiment runner for the cusp-map laboratory.
//
// Every subcommand is deterministic: identical config + seed produce
// byte-identical CSV output. Numerical experiment parameters can come from
// flags or from a key=value config file (--config), flags winning.

#include "cusplab/calculus.hpp"
#include "cusplab/csv.hpp"
#include "cusplab/ergodic.hpp"
#include "cusplab/extension.hpp"
#include "cusplab/families.hpp"
#include "cusplab/inducing.hpp"
#include "cusplab/numerics.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <bit>
#include <cstdlib>
#include <fstream>
#include <future>
#include <iostream>
#include <memory>
#include <sstream>
#include <thread>

using namespace cusplab;
using nlohmann::json;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitPrecondition = 4;

struct RunConfig {
    std::string family = "tent";
    double alpha = 1.0;
    double b = 1.8;
    uint64_t seed = 1;
    long n = 100000;
    int depth = 12;
    int bins = 512;
    std::string out;
    std::string json_out;

    // subcommand-specific
    double point = 0.0;
    std::string side = "auto";
    std::string weight = "lebesgue";
    int k_lo = 8;
    int k_hi = 48;
    std::string words = "8,12,16,20";
    double x0 = std::nan("");
    long burn_in = 0;
    std::string start = "auto"; // auto | exact | uniform | x0
    std::string measure = "bernoulli";
    double p = 0.3;
    long queries = 50;
    double u_lo = std::nan("");
    double u_hi = std::nan("");
    int return_order = 1;
    int seeds = 20;
    int len = 60;
    double radius = 0.01;
    std::string policy = "density";
    int bigN = 0;
    int terms = 200;
    std::string alphas = "0.25,0.5,0.75,0.9,1.0,1.1,1.5";
    std::string op = "classify";
    double grid_lo = std::nan("");
    double grid_hi = std::nan("");
};

PiecewiseMap make_family(const RunConfig& c) {
    if (c.family == "tent") return tent_map();
    if (c.family == "g_alpha") return make_g_alpha(c.alpha);
    if (c.family == "f_alpha") return make_f_alpha(c.alpha);
    if (c.family == "g_b") return make_g_b(c.b, c.alpha);
    throw CLI::ValidationError("--family", "unknown family: " + c.family);
}

bool family_has_kernel(const std::string& family) {
    return family == "g_alpha" || family == "f_alpha";
}

std::vector<double> parse_list(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(std::stod(item));
    return out;
}

std::vector<int> parse_int_list(const std::string& csv) {
    std::vector<int> out;
    for (double v : parse_list(csv)) out.push_back(static_cast<int>(v));
    return out;
}

std::string canonical(const RunConfig& c, const std::string& cmd) {
    std::ostringstream os;
    os << "cmd=" << cmd << ";family=" << c.family << ";alpha=" << csv_format(c.alpha)
       << ";b=" << csv_format(c.b) << ";seed=" << c.seed << ";n=" << c.n
       << ";depth=" << c.depth << ";bins=" << c.bins << ";point=" << csv_format(c.point)
       << ";side=" << c.side << ";weight=" << c.weight << ";k=" << c.k_lo << ".." << c.k_hi
       << ";words=" << c.words << ";burn_in=" << c.burn_in << ";start=" << c.start
       << ";measure=" << c.measure << ";p=" << csv_format(c.p) << ";queries=" << c.queries
       << ";r=" << c.return_order << ";seeds=" << c.seeds << ";len=" << c.len
       << ";radius=" << csv_format(c.radius) << ";policy=" << c.policy << ";N=" << c.bigN
       << ";terms=" << c.terms << ";alphas=" << c.alphas << ";op=" << c.op;
    return os.str();
}

struct Output {
    std::ofstream file;
    std::ostream* os = &std::cout;
    explicit Output(const std::string& path) {
        if (!path.empty()) {
            file.open(path);
            if (!file) throw CLI::ValidationError("--out", "cannot open " + path);
            os = &file;
        }
    }
};

int thread_budget(size_t tasks) {
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (hw <= 0) hw = 2;
    if (const char* env = std::getenv("CUSPLAB_THREADS")) {
        int v = std::atoi(env);
        if (v > 0) hw = v;
    }
    return std::max(1, std::min<int>(hw, static_cast<int>(tasks)));
}

// ----------------------------------------------------------------- lyapunov

double starting_point(const RunConfig& c, const PiecewiseMap& map, long& burn_in) {
    if (c.start == "x0" || !std::isnan(c.x0)) {
        burn_in = c.burn_in;
        return c.x0;
    }
    Rng rng(Rng::mix(c.seed, 0x17ab));
    if ((c.start == "auto" || c.start == "exact") && family_has_kernel(c.family)) {
        // inverse-CDF sample of the exact invariant density
        auto kern = make_kernel(c.alpha);
        burn_in = c.burn_in;
        double u = rng.uniform(1e-12, 1.0 - 1e-12);
        return c.family == "g_alpha" ? kern->value(u) : kern->inverse(u);
    }
    if (c.start == "exact")
        throw CLI::ValidationError("--start", "exact start needs a kernel family");
    burn_in = c.burn_in > 0 ? c.burn_in : 10000;
    const auto& amb = map.ambient();
    return amb.lo + amb.length() * rng.uniform(0.05, 0.95);
}

int run_lyapunov(const RunConfig& c) {
    PiecewiseMap map = make_family(c);
    long burn_in = 0;
    double x0 = starting_point(c, map, burn_in);
    auto res = birkhoff_lyapunov(map, x0, c.n, burn_in);
    Output out(c.out);
    CsvWriter w(*out.os);
    w.comment("config_hash=" + std::to_string(config_hash(canonical(c, "lyapunov"))));
    w.header({"family", "alpha", "b", "seed", "n", "chi", "is_final"});
    long step = std::max<long>(1, c.n / 10);
    for (size_t i = 0; i < res.running_averages.size(); ++i)
        w.row({c.family, c.alpha, c.b, static_cast<long long>(c.seed),
               static_cast<long long>(step * (i + 1)), res.running_averages[i], 0ll});
    w.row({c.family, c.alpha, c.b, static_cast<long long>(c.seed),
           static_cast<long long>(res.n), res.chi, 1ll});
    return 0;
}

// ----------------------------------------------------------------- classify

IntegrabilityVerdict classify_one(const RunConfig& c, double alpha) {
    RunConfig cc = c;
    cc.alpha = alpha;
    PiecewiseMap map = make_family(cc);
    Weight weight;
    if (c.weight == "exact") {
        if (cc.family != "g_alpha")
            throw PreconditionError("exact density weight requires the g_alpha family");
        weight = {Weight::Kind::exact_density, make_kernel(alpha)};
    } else if (c.weight == "lebesgue") {
        weight = {Weight::Kind::lebesgue, nullptr};
    } else {
        throw CLI::ValidationError("--weight", "expected lebesgue or exact");
    }
    Side side = Side::right;
    if (c.side == "left") side = Side::left;
    else if (c.side == "right") side = Side::right;
    else if (c.side == "both") side = Side::both;
    else if (c.side == "auto") side = cc.family == "g_b" ? Side::both : Side::right;
    else throw CLI::ValidationError("--side", "expected left/right/both/auto");
    return singular_integral_classify(map, c.point, side, weight, c.k_lo, c.k_hi);
}

const char* verdict_name(IntegrabilityVerdict::Kind k) {
    switch (k) {
    case IntegrabilityVerdict::Kind::convergent: return "convergent";
    case IntegrabilityVerdict::Kind::divergent: return "divergent";
    default: return "inconclusive";
    }
}

int run_classify(const RunConfig& c) {
    auto v = classify_one(c, c.alpha);
    Output out(c.out);
    CsvWriter w(*out.os);
    w.comment("config_hash=" + std::to_string(config_hash(canonical(c, "classify"))));
    w.header({"family", "alpha", "b", "weight", "point", "side", "k_lo", "k_hi",
              "fitted_ratio", "fitted_exponent", "total", "verdict"});
    w.row({c.family, c.alpha, c.b, c.weight, c.point, c.side,
           static_cast<long long>(v.k_lo), static_cast<long long>(v.k_hi), v.fitted_ratio,
           v.fitted_exponent, v.total, std::string(verdict_name(v.verdict))});
    if (!c.json_out.empty()) {
        json j{{"family", c.family},      {"alpha", c.alpha},
               {"weight", c.weight},      {"verdict", verdict_name(v.verdict)},
               {"fitted_ratio", v.fitted_ratio}, {"fitted_exponent", v.fitted_exponent},
               {"annulus_sums", v.annulus_sums}, {"k_lo", v.k_lo},
               {"k_hi", v.k_hi}};
        std::ofstream(c.json_out) << j.dump(2) << "\n";
    }
    return 0;
}

// ------------------------------------------------------------------ entropy

int run_entropy(const RunConfig& c) {
    PiecewiseMap map = make_family(c);
    double split = c.family == "g_b" ? 0.0 : 0.5;
    std::vector<OpenInterval> partition{OpenInterval(map.ambient().lo, split),
                                        OpenInterval(split, map.ambient().hi)};
    Rng rng(Rng::mix(c.seed, 0xe27));
    double x0 = std::isnan(c.x0)
                    ? map.ambient().lo + map.ambient().length() * rng.uniform(0.1, 0.9)
                    : c.x0;
    auto words = parse_int_list(c.words);
    auto res = entropy_word_count(map, partition, x0, c.n, words);
    Output out(c.out);
    CsvWriter w(*out.os);
    w.comment("config_hash=" + std::to_string(config_hash(canonical(c, "entropy"))));
    w.header({"family", "alpha", "n", "seed", "word_len", "rate", "distinct",
              "boundary_hits"});
    for (size_t i = 0; i < res.word_lengths.size(); ++i)
        w.row({c.family, c.alpha, static_cast<long long>(c.n),
               static_cast<long long>(c.seed),
               static_cast<long long>(res.word_lengths[i]), res.rates[i],
               static_cast<long long>(res.distinct_counts[i]),
               static_cast<long long>(res.boundary_perturbations)});
    return 0;
}

// ---------------------------------------------------------------- dimension

int run_dimension(const RunConfig& c) {
    std::vector<double> samples, queries;
    Rng rng(Rng::mix(c.seed, 0xd13));
    long nsamp = c.n;
    if (c.measure == "bernoulli" || c.measure == "bernoulli_push") {
        samples = sample_bernoulli_measure(c.p, 50, nsamp, Rng::mix(c.seed, 1));
        queries = sample_bernoulli_measure(c.p, 50, c.queries, Rng::mix(c.seed, 2));
        if (c.measure == "bernoulli_push") {
            auto kern = make_kernel(c.alpha);
            for (auto& s : samples) s = s > 0.0 && s < 1.0 ? kern->value(s) : s;
            std::vector<double> q2;
            for (double q : queries) {
                if (q < 1e-6 || q > 1.0 - 1e-6) continue; // interior points only
                q2.push_back(kern->value(q));
            }
            queries = q2;
        }
    } else if (c.measure == "acip_g") {
        auto kern = make_kernel(c.alpha);
        samples.reserve(nsamp);
        for (long i = 0; i < nsamp; ++i)
            samples.push_back(kern->value(rng.uniform(1e-15, 1.0 - 1e-15)));
        for (long i = 0; i < c.queries; ++i) {
            double q = kern->value(rng.uniform(1e-15, 1.0 - 1e-15));
            if (q > 0.02 && q < 0.98) queries.push_back(q);
        }
    } else if (c.measure == "lebesgue") {
        samples.reserve(nsamp);
        for (long i = 0; i < nsamp; ++i) samples.push_back(rng.uniform());
        for (long i = 0; i < c.queries; ++i) queries.push_back(rng.uniform(0.05, 0.95));
    } else {
        throw CLI::ValidationError("--measure", "unknown measure: " + c.measure);
    }
    std::vector<double> radii;
    for (int k = 3; k <= 19; ++k) radii.push_back(std::ldexp(1.0, -k));
    auto res = local_dimension(queries, samples, radii);
    Output out(c.out);
    CsvWriter w(*out.os);
    w.comment("config_hash=" + std::to_string(config_hash(canonical(c, "dimension"))));
    w.header({"measure", "p", "alpha", "query_index", "x", "slope"});
    for (size_t i = 0; i < res.query_points.size(); ++i)
        w.row({c.measure, c.p, c.alpha, static_cast<long long>(i), res.query_points[i],
               res.per_point_slope[i]});
    w.row({c.measure, c.p, c.alpha, -1ll, std::nan(""), res.pooled});
    return 0;
}

// ------------------------------------------------------------------ density

int run_density(const RunConfig& c) {
    PiecewiseMap map = make_family(c);
    long burn_in = 0;
    double x0 = starting_point(c, map, burn_in);
    for (long i = 0; i < burn_in; ++i) x0 = orbit_step(map, x0, i);
    auto est = density_histogram(map, x0, c.n, c.bins);
    ExactDensity exact;
    bool have_exact = true;
    if (c.family == "tent")
        exact = {ExactDensity::Kind::uniform, nullptr};
    else if (c.family == "g_alpha")
        exact = {ExactDensity::Kind::kernel_pull, make_kernel(c.alpha)};
    else if (c.family == "f_alpha")
        exact = {ExactDensity::Kind::kernel_push, make_kernel(c.alpha)};
    else
        have_exact = false;

    Output out(c.out);
    CsvWriter w(*out.os);
    w.comment("config_hash=" + std::to_string(config_hash(canonical(c, "density"))));
    if (have_exact)
        w.comment("l1_vs_exact=" + csv_format(compare_exact(est, exact)));
    if (est.orbit_broke) w.comment("orbit_broke=1");
    w.header({"bin_center", "density"});
    for (int i = 0; i < est.bin_count; ++i)
        w.row({est.bin_center(i), est.density(i)});
    return 0;
}

// ------------------------------------------------------------------- induce

OpenInterval default_interval(const RunConfig& c) {
    if (!std::isnan(c.u_lo) && !std::isnan(c.u_hi)) return OpenInterval(c.u_lo, c.u_hi);
    if (c.family == "tent") return OpenInterval(0.4, 0.8);
    if (c.family == "g_alpha") {
        auto kern = make_kernel(c.alpha);
        return OpenInterval(kern->value(0.4), kern->value(0.8));
    }
    throw PreconditionError("induce: no default interval for family " + c.family);
}

int run_induce(const RunConfig& c) {
    auto map = std::make_shared<const PiecewiseMap>(make_family(c));
    OpenInterval U = default_interval(c);
    std::vector<BuildSnapshot> trace;
    auto imm = build_induced(map, U, c.depth, c.return_order, &trace);
    Output out(c.out);
    CsvWriter w(*out.os);
    w.comment("config_hash=" + std::to_string(config_hash(canonical(c, "induce"))));
    w.comment("U=[" + csv_format(U.lo) + "," + csv_format(U.hi) + "] return_order=" +
              std::to_string(imm.return_order));
    w.header({"depth", "branch_count", "kac_sum", "residual", "lambda_min"});
    for (const auto& s : trace)
        w.row({static_cast<long long>(s.depth), static_cast<long long>(s.branch_count),
               s.kac_sum, s.residual, s.lambda_min});
    return 0;
}

// ------------------------------------------------------------------- spread

int run_spread(const RunConfig& c) {
    auto map = std::make_shared<const PiecewiseMap>(make_family(c));
    OpenInterval U = default_interval(c);
    auto imm = build_induced(map, U, c.depth, c.return_order);
    auto tr = transfer_density(imm, 512, 20000);
    auto sp = spread_measure(imm, tr.density, c.bins);

    Output out(c.out);
    CsvWriter w(*out.os);
    w.comment("config_hash=" + std::to_string(config_hash(canonical(c, "spread"))));
    if (c.family == "tent")
        w.comment("l1_vs_exact=" +
                  csv_format(compare_exact(sp.density, {ExactDensity::Kind::uniform, nullptr})));
    else if (c.family == "g_alpha")
        w.comment("l1_vs_exact=" +
                  csv_format(compare_exact(
                      sp.density, {ExactDensity::Kind::kernel_pull, make_kernel(c.alpha)})));
    w.comment("mass_kac=" + csv_format(sp.mass_kac));
    w.header({"bin_center", "density"});
    for (int i = 0; i < sp.density.bin_count; ++i)
        w.row({sp.density.bin_center(i), sp.density.density(i)});
    return 0;
}

// ----------------------------------------------------------------- pullback

int run_pullback(const RunConfig& c) {
    PiecewiseMap map = make_family(c);
    std::shared_ptr<const ConjugacyKernel> kern;
    if (family_has_kernel(c.family)) kern = make_kernel(c.alpha);
    PullbackPolicy policy = c.policy == "uniform" ? PullbackPolicy::uniform_branch
                                                  : PullbackPolicy::density_weighted;
    Output out(c.out);
    CsvWriter w(*out.os);
    w.comment("config_hash=" + std::to_string(config_hash(canonical(c, "pullback"))));
    w.header({"seed", "n", "length", "distortion_sum", "shrink_events"});
    for (int s = 1; s <= c.seeds; ++s) {
        uint64_t seed = Rng::mix(c.seed, static_cast<uint64_t>(s));
        Rng rng(seed);
        double y0;
        if (c.family == "g_alpha")
            y0 = kern->value(rng.uniform(1e-12, 1.0 - 1e-12));
        else
            y0 = map.ambient().lo + map.ambient().length() * rng.uniform(0.2, 0.8);
        auto orbit = backward_orbit(map, y0, c.len, policy, kern, Rng::mix(seed, 7));
        auto trace = pullback_interval(map, orbit, OpenInterval(y0 - c.radius, y0 + c.radius));
        for (size_t i = 0; i < trace.lengths.size(); ++i)
            w.row({static_cast<long long>(s), static_cast<long long>(i), trace.lengths[i],
                   trace.distortion_partial_sums[i],
                   static_cast<long long>(trace.shrink_events)});
    }
    return 0;
}

// ------------------------------------------------------------------- series

int run_series(const RunConfig& c) {
    auto res = infinite_exponent_series(c.alpha, c.p, c.bigN, c.terms);
    const char* verdict =
        res.verdict == SeriesResult::Kind::divergent ? "divergent" : "convergent";
    Output out(c.out);
    CsvWriter w(*out.os);
    w.comment("config_hash=" + std::to_string(config_hash(canonical(c, "series"))));
    w.comment(std::string("verdict=") + verdict + " ratio=" + csv_format(res.ratio));
    if (res.verdict == SeriesResult::Kind::convergent)
        w.comment("lower_limit=" + csv_format(res.lower_limit) +
                  " upper_limit=" + csv_format(res.upper_limit));
    w.header({"term", "lower_partial_sum", "upper_partial_sum"});
    for (size_t i = 0; i < res.lower_partial_sums.size(); ++i)
        w.row({static_cast<long long>(i), res.lower_partial_sums[i],
               res.upper_partial_sums[i]});
    if (!c.json_out.empty()) {
        json j{{"alpha", c.alpha}, {"p", c.p},       {"N", c.bigN},
               {"ratio", res.ratio}, {"verdict", verdict}};
        std::ofstream(c.json_out) << j.dump(2) << "\n";
    }
    std::cerr << "series: alpha=" << c.alpha << " verdict=" << verdict << "\n";
    return 0;
}

// ---------------------------------------------------------------- eval-grid

int run_eval_grid(const RunConfig& c) {
    PiecewiseMap map = make_family(c);
    double lo = std::isnan(c.grid_lo) ? map.ambient().lo + 1e-9 : c.grid_lo;
    double hi = std::isnan(c.grid_hi) ? map.ambient().hi - 1e-9 : c.grid_hi;
    Output out(c.out);
    CsvWriter w(*out.os);
    w.comment("config_hash=" + std::to_string(config_hash(canonical(c, "eval-grid"))));
    w.header({"x", "value", "log_abs_deriv", "branch"});
    for (long i = 0; i < c.n; ++i) {
        double x = lo + (hi - lo) * (static_cast<double>(i) + 0.5) / c.n;
        int b = map.find_branch(x);
        if (b < 0) continue;
        w.row({x, map.eval(x), map.log_abs_deriv(x), static_cast<long long>(b)});
    }
    return 0;
}

// -------------------------------------------------------------------- sweep

int run_sweep(const RunConfig& c) {
    auto alphas = parse_list(c.alphas);
    if (alphas.empty()) throw CLI::ValidationError("--alphas", "empty alpha list");

    struct RowResult {
        double alpha;
        bool failed = false;
        std::string verdict;
        double value = 0.0;
    };
    auto task = [&](double alpha) -> RowResult {
        RowResult r{alpha};
        try {
            if (c.op == "classify") {
                auto v = classify_one(c, alpha);
                r.verdict = verdict_name(v.verdict);
                r.value = v.fitted_ratio;
            } else if (c.op == "series") {
                auto v = infinite_exponent_series(alpha, c.p, c.bigN, c.terms);
                r.verdict =
                    v.verdict == SeriesResult::Kind::divergent ? "divergent" : "convergent";
                r.value = v.ratio;
            } else if (c.op == "lyapunov") {
                RunConfig cc = c;
                cc.alpha = alpha;
                cc.seed = Rng::mix(c.seed, std::bit_cast<uint64_t>(alpha));
                PiecewiseMap map = make_family(cc);
                long burn_in = 0;
                double x0 = starting_point(cc, map, burn_in);
                r.value = birkhoff_lyapunov(map, x0, cc.n, burn_in).chi;
                r.verdict = "ok";
            } else {
                throw PreconditionError("sweep: unsupported op " + c.op);
            }
        } catch (const MapError&) {
            r.failed = true;
        }
        return r;
    };

    // fan out, merge in parameter order so concurrency never affects bytes
    std::vector<RowResult> rows(alphas.size());
    const int threads = thread_budget(alphas.size());
    std::vector<std::future<void>> futs;
    std::atomic<size_t> cursor{0};
    for (int t = 0; t < threads; ++t)
        futs.push_back(std::async(std::launch::async, [&] {
            for (;;) {
                size_t i = cursor.fetch_add(1);
                if (i >= alphas.size()) return;
                rows[i] = task(alphas[i]);
            }
        }));
    for (auto& f : futs) f.get();

    Output out(c.out);
    CsvWriter w(*out.os);
    w.comment("config_hash=" + std::to_string(config_hash(canonical(c, "sweep"))));
    w.header({"op", "family", "alpha", "verdict", "value", "failed"});
    for (const auto& r : rows)
        w.row({c.op, c.family, r.alpha, r.failed ? "failed" : r.verdict, r.value,
               static_cast<long long>(r.failed ? 1 : 0)});
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"cusp-map ergodic laboratory"};
    app.set_config("--config", "", "key=value config file; flags override");
    RunConfig c;

    app.add_option("--family", c.family, "tent | g_alpha | f_alpha | g_b");
    app.add_option("--alpha", c.alpha, "family parameter alpha > 0");
    app.add_option("--b", c.b, "g_b height parameter in (0,2]");
    app.add_option("--seed", c.seed, "base RNG seed");
    app.add_option("--n", c.n, "orbit length / sample count");
    app.add_option("--depth", c.depth, "induced-map build depth");
    app.add_option("--bins", c.bins, "histogram bins");
    app.add_option("--out", c.out, "output CSV path (default stdout)");
    app.add_option("--json", c.json_out, "also write a JSON verdict report");

    auto* lyap = app.add_subcommand("lyapunov", "Birkhoff average of log|Df|");
    lyap->add_option("--x0", c.x0, "explicit starting point");
    lyap->add_option("--burn-in", c.burn_in, "discarded leading steps");
    lyap->add_option("--start", c.start, "auto | exact | uniform | x0");

    auto* cls = app.add_subcommand("classify", "singular-integral integrability verdict");
    cls->add_option("--point", c.point, "singular point");
    cls->add_option("--side", c.side, "left | right | both | auto");
    cls->add_option("--weight", c.weight, "lebesgue | exact");
    cls->add_option("--kmin", c.k_lo, "smallest annulus scale 2^-k");
    cls->add_option("--kmax", c.k_hi, "largest annulus scale 2^-k");

    auto* ent = app.add_subcommand("entropy", "distinct-word entropy estimate");
    ent->add_option("--words", c.words, "comma list of word lengths");
    ent->add_option("--x0", c.x0, "explicit starting point");

    auto* dim = app.add_subcommand("dimension", "local dimension of a measure");
    dim->add_option("--measure", c.measure, "lebesgue | bernoulli | bernoulli_push | acip_g");
    dim->add_option("--p", c.p, "Bernoulli parameter");
    dim->add_option("--queries", c.queries, "number of query points");

    auto* den = app.add_subcommand("density", "invariant-density histogram");
    den->add_option("--x0", c.x0, "explicit starting point");
    den->add_option("--start", c.start, "auto | exact | uniform | x0");
    den->add_option("--burn-in", c.burn_in, "discarded leading steps");

    auto* ind = app.add_subcommand("induce", "build the induced Markov map");
    ind->add_option("--u-lo", c.u_lo, "inducing interval left endpoint");
    ind->add_option("--u-hi", c.u_hi, "inducing interval right endpoint");
    ind->add_option("--r", c.return_order, "return order");

    auto* spr = app.add_subcommand("spread", "spread the induced density to the ambient map");
    spr->add_option("--u-lo", c.u_lo, "inducing interval left endpoint");
    spr->add_option("--u-hi", c.u_hi, "inducing interval right endpoint");
    spr->add_option("--r", c.return_order, "return order");

    auto* pbk = app.add_subcommand("pullback", "backward-orbit pullback traces");
    pbk->add_option("--seeds", c.seeds, "number of independent orbits");
    pbk->add_option("--len", c.len, "backward orbit length");
    pbk->add_option("--radius", c.radius, "initial interval radius");
    pbk->add_option("--policy", c.policy, "uniform | density");

    auto* ser = app.add_subcommand("series", "boundary-pole Lyapunov series bounds");
    ser->add_option("--p", c.p, "base point p in (0,1)");
    ser->add_option("--N", c.bigN, "offset N >= 0");
    ser->add_option("--terms", c.terms, "partial-sum terms");

    auto* grid = app.add_subcommand("eval-grid", "map/derivative table for plotting");
    grid->add_option("--grid-lo", c.grid_lo, "grid start");
    grid->add_option("--grid-hi", c.grid_hi, "grid end");

    auto* swp = app.add_subcommand("sweep", "parameter sweep, one row per alpha");
    swp->add_option("--op", c.op, "classify | series | lyapunov");
    swp->add_option("--alphas", c.alphas, "comma list of alpha values");
    swp->add_option("--p", c.p, "series base point");

    app.require_subcommand(1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        std::cerr << "error code=" << kExitConfig << " reason=\"" << e.what() << "\"\n";
        return kExitConfig;
    }

    try {
        if (lyap->parsed()) return run_lyapunov(c);
        if (cls->parsed()) return run_classify(c);
        if (ent->parsed()) return run_entropy(c);
        if (dim->parsed()) return run_dimension(c);
        if (den->parsed()) return run_density(c);
        if (ind->parsed()) return run_induce(c);
        if (spr->parsed()) return run_spread(c);
        if (pbk->parsed()) return run_pullback(c);
        if (ser->parsed()) return run_series(c);
        if (grid->parsed()) return run_eval_grid(c);
        if (swp->parsed()) return run_sweep(c);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error code=" << kExitConfig << " reason=\"" << e.what() << "\"\n";
        return kExitConfig;
    } catch (const PreconditionError& e) {
        std::cerr << "error code=" << kExitPrecondition << " reason=\"" << e.what()
                  << "\"\n";
        return kExitPrecondition;
    } catch (const MapError& e) {
        std::cerr << "error code=" << kExitNumerical << " reason=\"" << e.what() << "\"\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error code=" << kExitNumerical << " reason=\"" << e.what() << "\"\n";
        return kExitNumerical;
    }
    return 0;
}
