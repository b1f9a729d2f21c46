#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <ostream>
#include <sstream>
#include <type_traits>

#include "dgbo/bilinear.hpp"
#include "dgbo/dyadic.hpp"
#include "dgbo/errors.hpp"
#include "dgbo/linear.hpp"
#include "dgbo/probes.hpp"
#include "dgbo/records.hpp"
#include "dgbo/resonance.hpp"
#include "dgbo/seed.hpp"
#include "dgbo/solver.hpp"
#include "dgbo/svg.hpp"

namespace dgbo {
namespace {

constexpr const char* kVersion = "0.1.0";

template <class T>
struct is_vector : std::false_type {};
template <class T>
struct is_vector<std::vector<T>> : std::true_type {};

std::string text(double v) { return format_double(v); }
std::string text(bool v) { return v ? "true" : "false"; }
std::string text(const std::string& v) { return v; }
template <class T>
    requires std::is_integral_v<T>
std::string text(T v) {
    return std::to_string(v);
}
template <class T>
std::string text(const std::vector<T>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ',';
        s += text(v[i]);
    }
    return s;
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

// Options of one subcommand, their current values for the manifest, and the
// flat `key = value` config reader. Values given on the command line win.
class Registry {
public:
    explicit Registry(CLI::App* app) : app_(app) {
        app_->add_option("--config", config_path_, "flat key = value file; flags override it");
    }

    template <class T>
    CLI::Option* add(const std::string& key, T& var, const std::string& desc) {
        auto* o = app_->add_option("--" + key, var, desc);
        std::function<bool()> clear = [] { return false; };
        if constexpr (is_vector<T>::value) {
            o->delimiter(',');
            clear = [&var] {
                var.clear();
                return true;
            };
        }
        entries_.push_back({key, o, [&var] { return text(var); }, clear});
        return o;
    }

    CLI::Option* flag(const std::string& key, bool& var, const std::string& desc) {
        auto* o = app_->add_flag("--" + key, var, desc);
        entries_.push_back({key, o, [&var] { return text(var); }, [] { return false; }});
        return o;
    }

    void apply_config() const {
        if (config_path_.empty()) return;
        std::ifstream is(config_path_);
        if (!is) fail_validation(ErrorKind::Config, "cannot read config file '" + config_path_ + "'");
        std::string line;
        int lineno = 0;
        while (std::getline(is, line)) {
            ++lineno;
            if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
            line = trim(line);
            if (line.empty()) continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                fail_validation(ErrorKind::Config, config_path_ + ":" + std::to_string(lineno) + ": expected key = value");
            const std::string key = trim(line.substr(0, eq));
            std::string value = trim(line.substr(eq + 1));
            if (value.size() >= 2 && (value.front() == '"' || value.front() == '\'') && value.back() == value.front())
                value = value.substr(1, value.size() - 2);
            auto it = std::find_if(entries_.begin(), entries_.end(), [&](const Entry& e) { return e.key == key; });
            if (it == entries_.end())
                fail_validation(ErrorKind::Config, config_path_ + ":" + std::to_string(lineno) + ": unknown key '" +
                                                       key + "' for " + app_->get_name());
            if (it->opt->count() > 0) continue;
            if (value.empty()) {
                // an empty list; scalars need a value
                if (!it->clear())
                    fail_validation(ErrorKind::Config, config_path_ + ":" + std::to_string(lineno) + ": '" + key +
                                                           "' needs a value");
                continue;
            }
            try {
                it->opt->add_result(value);
                it->opt->run_callback();
            } catch (const CLI::Error& e) {
                fail_validation(ErrorKind::Config, config_path_ + ":" + std::to_string(lineno) + ": " + e.what());
            }
        }
    }

    std::vector<std::pair<std::string, std::string>> values() const {
        std::vector<std::pair<std::string, std::string>> out;
        for (const auto& e : entries_) out.emplace_back(e.key, e.value());
        return out;
    }

private:
    struct Entry {
        std::string key;
        CLI::Option* opt;
        std::function<std::string()> value;
        std::function<bool()> clear;
    };
    CLI::App* app_;
    std::string config_path_;
    std::vector<Entry> entries_;
};

struct Common {
    std::uint64_t seed = 0;
    std::string out = "dgbo-out";
    std::string format = "jsonl";

    void add(Registry& reg) {
        reg.add("seed", seed, "base seed");
        reg.add("out", out, "output directory");
        reg.add("format", format, "record format: jsonl or csv")->check(CLI::IsMember({"jsonl", "csv"}));
    }
};

class Output {
public:
    Output(const std::string& command, const Common& c) : command_(command), dir_(c.out), format_(parse_format(c.format)) {}

    template <class R>
    void records(const std::string& stem, const std::vector<R>& recs) {
        prepare();
        const std::string name = stem + "." + extension(format_);
        emit_records(recs, format_, path(name));
        files_.push_back(name);
    }

    void rows(const std::string& stem, const std::vector<std::string>& header, const std::vector<Row>& rows) {
        prepare();
        const std::string name = stem + "." + extension(format_);
        write_text(path(name), serialize(header, rows, format_));
        files_.push_back(name);
    }

    void file(const std::string& name, const std::string& content) {
        prepare();
        write_text(path(name), content);
        files_.push_back(name);
    }

    void manifest(const Registry& reg) {
        prepare();
        std::string cfg = "# dgbo " + command_ + "\n# rerun: dgbo " + command_ + " --config manifest.cfg\n";
        nlohmann::ordered_json j;
        j["subcommand"] = command_;
        nlohmann::ordered_json conf = nlohmann::ordered_json::object();
        for (const auto& [k, v] : reg.values()) {
            cfg += k + " = " + v + "\n";
            conf[k] = v;
        }
        j["config"] = conf;
        j["versions"] = {{"dgbo", kVersion}, {"fft", fft_backend_version()}, {"cli11", CLI11_VERSION},
                         {"compiler", __VERSION__}};
        j["outputs"] = files_;
        write_text(path("manifest.cfg"), cfg);
        write_text(path("manifest.json"), j.dump(2) + "\n");
    }

    Format format() const { return format_; }
    const std::string& dir() const { return dir_; }

private:
    void prepare() {
        if (ready_) return;
        std::error_code ec;
        std::filesystem::create_directories(dir_, ec);
        if (ec) throw RuntimeFailure(ErrorKind::Io, "cannot create output directory '" + dir_ + "': " + ec.message());
        ready_ = true;
    }
    std::string path(const std::string& name) const { return (std::filesystem::path(dir_) / name).string(); }

    std::string command_;
    std::string dir_;
    Format format_;
    bool ready_ = false;
    std::vector<std::string> files_;
};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

std::vector<long> dyadic_range(long lo, long hi, const char* what) {
    check_dyadic(lo);
    check_dyadic(hi);
    if (lo > hi) fail_validation(ErrorKind::Domain, std::string(what) + ": lower limit exceeds upper limit");
    std::vector<long> out;
    for (long n = lo; n <= hi; n *= 2) out.push_back(n);
    return out;
}

double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// --- solve / picard -------------------------------------------------------

struct SolveArgs {
    double alpha = 1.0, T = 1.0, dt = 1e-3, half_width = 8.0 * std::numbers::pi;
    std::size_t nx = 128, samples = 10;
    double amplitude = 0.05, band = 2.0;
    bool no_dealias = false;
    Common common;

    void add(Registry& reg) {
        reg.add("alpha", alpha, "dispersion parameter in (0, 1]");
        reg.add("T", T, "time horizon");
        reg.add("dt", dt, "time step");
        reg.add("nx", nx, "spatial points (power of two)");
        reg.add("half-width", half_width, "spatial domain [-L, L)");
        reg.add("samples", samples, "diagnostic samples after t = 0");
        reg.add("amplitude", amplitude, "L2 norm of the seeded initial data");
        reg.add("band", band, "initial data supported in |xi| <= band");
        reg.flag("no-dealias", no_dealias, "disable the 2/3 rule");
        common.add(reg);
    }
    SolveConfig config() const {
        SolveConfig c;
        c.alpha = alpha;
        c.T = T;
        c.dt = dt;
        c.half_width = half_width;
        c.n_x = nx;
        c.n_samples = samples;
        c.dealias = !no_dealias;
        return c;
    }
};

void run_solve(const SolveArgs& a, const Registry& reg, std::ostream& out) {
    const auto cfg = a.config();
    validate(cfg);
    const auto u0 = random_band_limited(cfg.space(), a.band, a.common.seed, a.amplitude);
    const auto res = solve(u0, cfg);

    Output o("solve", a.common);
    o.records("solve", res.diagnostics);
    std::vector<Row> state;
    const auto u = inverse_real(res.final_state);
    for (std::size_t j = 0; j < u.size(); ++j) state.push_back({{"x", res.final_state.grid.x(j)}, {"u", u[j]}});
    o.rows("state", {"x", "u"}, state);
    o.manifest(reg);

    const auto& d0 = res.diagnostics.front();
    double dm = 0, dl = 0, de = 0;
    for (const auto& d : res.diagnostics) {
        dm = std::max(dm, std::abs(d.mean - d0.mean));
        dl = std::max(dl, d0.l2 > 0 ? std::abs(d.l2 - d0.l2) / d0.l2 : 0.0);
        de = std::max(de, d0.energy != 0 ? std::abs(d.energy - d0.energy) / std::abs(d0.energy) : 0.0);
    }
    out << "mean drift " << fmt("%.3e", dm) << "\nL2 drift " << fmt("%.3e", dl) << "\nenergy drift "
        << fmt("%.3e", de) << "\n";
}

struct PicardArgs {
    double alpha = 1.0, r = 1.9, s = 0.0, epsilon = 0.05, T = 0.1, half_width = 8.0 * std::numbers::pi;
    std::size_t nx = 128, nt = 256;
    double amplitude = 0.01, band = 2.0, tol = 1e-10, dt = 1e-3;
    int max_iters = 25;
    bool no_dealias = false, compare = false;
    Common common;

    void add(Registry& reg) {
        reg.add("alpha", alpha, "dispersion parameter in (0, 1]");
        reg.add("r", r, "Fourier-Lebesgue exponent");
        reg.add("s", s, "regularity");
        reg.add("b-epsilon", epsilon, "b = 1/r + eps, b' = -1/r' + 2 eps");
        reg.add("T", T, "local existence time");
        reg.add("nx", nx, "spatial points");
        reg.add("nt", nt, "time points on [-2T, 2T), divisible by 8");
        reg.add("half-width", half_width, "spatial domain [-L, L)");
        reg.add("amplitude", amplitude, "L2 norm of the seeded initial data");
        reg.add("band", band, "initial data supported in |xi| <= band");
        reg.add("max-iters", max_iters, "iteration cap");
        reg.add("tol", tol, "residual tolerance");
        reg.add("dt", dt, "time step of the cross-check solve");
        reg.flag("compare", compare, "also report the gap to the time-stepping solver on [0, T]");
        reg.flag("no-dealias", no_dealias, "disable the 2/3 rule");
        common.add(reg);
    }
    SolveConfig config() const {
        SolveConfig c;
        c.alpha = alpha;
        c.r = r;
        c.s = s;
        c.epsilon = epsilon;
        c.T = T;
        c.n_x = nx;
        c.n_t = nt;
        c.half_width = half_width;
        c.max_picard_iters = max_iters;
        c.picard_tol = tol;
        c.dt = dt;
        c.dealias = !no_dealias;
        return c;
    }
};

std::vector<Row> picard_rows(const PicardResult& p) {
    std::vector<Row> rows;
    for (std::size_t n = 1; n <= p.residuals.size(); ++n) {
        const double kappa = n >= 2 ? p.kappas[n - 2] : std::nan("");
        rows.push_back({{"iteration", static_cast<long long>(n)}, {"kappa", kappa}, {"residual", p.residuals[n - 1]}});
    }
    return rows;
}

void run_picard(const PicardArgs& a, const Registry& reg, std::ostream& out) {
    const auto cfg = a.config();
    validate(cfg);
    const auto u0 = random_band_limited(cfg.space(), a.band, a.common.seed, a.amplitude);
    const auto p = picard_iterate(u0, cfg);

    Output o("picard", a.common);
    o.rows("picard", {"iteration", "kappa", "residual"}, picard_rows(p));
    Series ks{"kappa", {}, {}};
    for (std::size_t i = 0; i < p.kappas.size(); ++i) {
        ks.x.push_back(static_cast<double>(i + 2));
        ks.y.push_back(p.kappas[i]);
    }
    o.file("picard.svg", render_chart({"Picard contraction factors", "iteration", "kappa", false, true, false}, {ks}));
    o.manifest(reg);

    out << "iterations " << p.residuals.size() << "\nconverged " << (p.converged ? "yes" : "no") << "\ndiverged "
        << (p.diverged ? "yes" : "no") << "\n";
    if (!p.kappas.empty()) out << "max kappa " << fmt("%.6g", *std::max_element(p.kappas.begin(), p.kappas.end())) << "\n";
    if (!p.residuals.empty()) out << "final residual " << fmt("%.3e", p.residuals.back()) << "\n";
    if (a.compare) out << "solve gap " << fmt("%.3e", solve_picard_gap(u0, cfg, p)) << "\n";
}

// --- certify-bilinear -------------------------------------------------------

struct CertifyArgs {
    std::vector<std::string> lemmas{"all"};
    std::vector<std::string> cases;
    std::vector<double> alphas{1.0}, rs{2.0};
    long n_min = 2, n_max = 256, l_min = 1, l_max = 1024;
    int resolution = 16, trials = 32;
    double epsilon = 0.05;
    std::string profile = "random";
    Common common;

    void add(Registry& reg) {
        reg.add("lemma", lemmas, "L31, L32a, L32b, L33a_opp, L33a_same, L33b or all");
        reg.add("case", cases, "restrict to high_low, high_high_opposite, high_high_same");
        reg.add("alpha", alphas, "dispersion parameters");
        reg.add("r", rs, "Fourier-Lebesgue exponents");
        reg.add("N-min", n_min, "smallest N_max");
        reg.add("N-max", n_max, "largest N_max");
        reg.add("L-min", l_min, "smallest L_max");
        reg.add("L-max", l_max, "largest L_max");
        reg.add("resolution", resolution, "lattice cells per octave");
        reg.add("trials", trials, "random test functions per tuple");
        reg.add("b-epsilon", epsilon, "b = 1/r + eps in the X-hat norms");
        reg.add("profile", profile, "random or smooth test functions")->check(CLI::IsMember({"random", "smooth"}));
        common.add(reg);
    }
};

void run_certify(const CertifyArgs& a, const Registry& reg, std::ostream& out) {
    CertifySpec spec;
    for (const auto& l : a.lemmas) {
        if (l == "all") {
            spec.lemmas = all_lemmas();
            break;
        }
        spec.lemmas.push_back(parse_lemma(l));
    }
    for (const auto& c : a.cases) spec.kinds.push_back(parse_case_kind(c));
    spec.alphas = a.alphas;
    spec.rs = a.rs;
    spec.ranges = {a.n_min, a.n_max, a.l_min, a.l_max, a.resolution};
    spec.trials = a.trials;
    spec.seed = a.common.seed;
    spec.b_epsilon = a.epsilon;
    spec.profile = a.profile == "smooth" ? TestProfile::Smooth : TestProfile::Random;
    const auto recs = certify(spec);

    Output o("certify-bilinear", a.common);
    o.records("certify-bilinear", recs);
    for (std::size_t ia = 0; ia < a.alphas.size(); ++ia) {
        std::vector<Series> series;
        for (LemmaId lemma : spec.lemmas) {
            std::vector<EstimateRatioRecord> sub;
            for (const auto& r : recs)
                if (r.lemma == to_string(lemma) && r.alpha == a.alphas[ia]) sub.push_back(r);
            for (double r : a.rs) {
                const auto nfit = worst_case_slope(sub, SlopeAxis::NMax, r);
                const auto lfit = worst_case_slope(sub, SlopeAxis::LMax, r);
                if (nfit.points == 0) continue;
                series.push_back({std::string(to_string(lemma)) + " r=" + fmt("%g", r), nfit.x, nfit.worst});
                out << to_string(lemma) << " alpha=" << fmt("%g", a.alphas[ia]) << " r=" << fmt("%g", r)
                    << " slope_N=" << fmt("%.4f", nfit.slope) << " tail_N=" << fmt("%.4f", nfit.tail_slope)
                    << " slope_L=" << fmt("%.4f", lfit.slope) << " tail_L=" << fmt("%.4f", lfit.tail_slope) << "\n";
            }
        }
        o.file("certify-bilinear-alpha" + std::to_string(ia) + ".svg",
               render_chart({"worst-case ratio, alpha = " + fmt("%g", a.alphas[ia]), "N_max", "max ratio", true, true, false},
                            series));
    }
    o.manifest(reg);
    out << "records " << recs.size() << "\n";
}

// --- verify-linear / verify-smoothing ----------------------------------------

struct LinearArgs {
    std::string which = "strichartz";
    double q = infinity, p = 2.0, r = 2.0, s = 0.0, epsilon = 0.05, T = 1.0, alpha = 1.0;
    std::size_t count = 20, nx = 256, nt = 256;
    double half_width = 32.0, t_width = 4.0, band = 3.0;
    Common common;

    void add(Registry& reg) {
        reg.add("which", which, "strichartz, homogeneous or duhamel")
            ->check(CLI::IsMember({"strichartz", "homogeneous", "duhamel"}));
        reg.add("q", q, "time exponent (inf allowed)");
        reg.add("p", p, "space exponent (inf allowed)");
        reg.add("r", r, "Fourier-Lebesgue exponent");
        reg.add("s", s, "regularity");
        reg.add("b-epsilon", epsilon, "b = 1/r + eps, b' = -1/r' + 2 eps");
        reg.add("T", T, "Duhamel cutoff scale");
        reg.add("alpha", alpha, "dispersion parameter in (0, 1]");
        reg.add("count", count, "random data samples");
        reg.add("nx", nx, "spatial points");
        reg.add("nt", nt, "time points");
        reg.add("half-width", half_width, "spatial domain [-L, L)");
        reg.add("t-width", t_width, "time window [-t_width, t_width)");
        reg.add("band", band, "data supported in |xi| <= band");
        common.add(reg);
    }
};

void run_verify_linear(const LinearArgs& a, const Registry& reg, std::ostream& out) {
    const auto grid = make_space_time_grid(a.half_width, a.nx, a.t_width, a.nt);
    const double b = 1.0 / a.r + a.epsilon, bp = -(1.0 - 1.0 / a.r) + 2.0 * a.epsilon;
    if (a.which == "strichartz") {
        if (auto why = strichartz_violation(a.q, a.p, a.r); !why.empty()) fail_validation(ErrorKind::Admissibility, why);
    } else if (a.which == "duhamel") {
        if (auto why = duhamel_hypothesis_violation(b, bp, a.r); !why.empty())
            fail_validation(ErrorKind::Hypothesis, "Duhamel estimate " + why);
    }
    std::vector<Row> rows;
    std::vector<double> ratios;
    for (std::size_t i = 0; i < a.count; ++i) {
        const std::uint64_t seed = derive_seed(a.common.seed, i);
        const auto phi = random_band_limited(grid.space, a.band, seed);
        double ratio = 0.0;
        if (a.which == "strichartz") {
            ratio = strichartz_ratio(phi, a.q, a.p, a.r, a.alpha, grid.time);
        } else if (a.which == "homogeneous") {
            ratio = linear_estimates_check(LinearEstimate::Homogeneous, {phi, {}, grid.time}, a.s, b, bp, a.r, a.T, a.alpha);
        } else {
            SliceField f = make_slice_field(grid);
            for (std::size_t m = 0; m < grid.time.n; ++m) {
                const double t = grid.time.x(m);
                const auto w = propagate(phi, t, a.alpha);
                const double c = bump_psi(t / a.T);
                auto sl = f.slice(m);
                for (std::size_t k = 0; k < grid.space.n; ++k) sl[k] = c * w.coeffs[k];
            }
            ratio = linear_estimates_check(LinearEstimate::Duhamel, {{}, f, {}}, a.s, b, bp, a.r, a.T, a.alpha);
        }
        ratios.push_back(ratio);
        rows.push_back({{"estimate", a.which}, {"sample", static_cast<long long>(i)}, {"seed", seed}, {"ratio", ratio}});
    }
    Output o("verify-linear", a.common);
    o.rows("verify-linear", {"estimate", "sample", "seed", "ratio"}, rows);
    o.manifest(reg);
    if (!ratios.empty()) {
        const double med = median(ratios);
        out << "min " << fmt("%.10g", *std::min_element(ratios.begin(), ratios.end())) << "\nmedian "
            << fmt("%.10g", med) << "\nmax " << fmt("%.10g", *std::max_element(ratios.begin(), ratios.end()))
            << "\n";
    }
}

struct SmoothingArgs {
    std::vector<double> alphas{0.25, 0.5, 1.0}, rs{1.25, 1.5, 2.0};
    double t_width = 8.0, xi_lo = 1.0, xi_hi = 2.0;
    std::size_t nt = 512;
    bool refine = false;
    Common common;

    void add(Registry& reg) {
        reg.add("alpha", alphas, "dispersion parameters");
        reg.add("r", rs, "Fourier-Lebesgue exponents");
        reg.add("t-width", t_width, "time window [-t_width, t_width)");
        reg.add("nt", nt, "time points");
        reg.add("xi-lo", xi_lo, "lower edge of the data band");
        reg.add("xi-hi", xi_hi, "upper edge of the data band");
        reg.flag("refine", refine, "also run with t_width and n_t doubled");
        common.add(reg);
    }
};

void run_verify_smoothing(const SmoothingArgs& a, const Registry& reg, std::ostream& out) {
    const std::vector<std::string> header{"alpha", "r", "t_width", "n_t", "n_x", "half_width", "lhs",
                                          "rhs", "constant", "rel_error", "spread", "band"};
    std::vector<Row> rows;
    for (double alpha : a.alphas)
        for (double r : a.rs)
            for (int level = 0; level <= (a.refine ? 1 : 0); ++level) {
                const double tw = a.t_width * (1 << level);
                const std::size_t nt = a.nt << level;
                const auto grid = smoothing_space_grid(a.xi_hi, alpha, tw);
                const auto c = local_smoothing_check(band_bump(grid, a.xi_lo, a.xi_hi), r, alpha, make_grid(tw, nt));
                rows.push_back({{"alpha", alpha},
                                {"r", r},
                                {"t_width", tw},
                                {"n_t", static_cast<long long>(nt)},
                                {"n_x", static_cast<long long>(grid.n)},
                                {"half_width", grid.half_width},
                                {"lhs", c.lhs},
                                {"rhs", c.rhs},
                                {"constant", c.constant},
                                {"rel_error", c.rel_error},
                                {"spread", c.spread},
                                {"band", c.band}});
                out << "alpha=" << fmt("%g", alpha) << " r=" << fmt("%g", r) << " t_width=" << fmt("%g", tw)
                    << " rel_error=" << fmt("%.3e", c.rel_error) << " spread=" << fmt("%.3e", c.spread) << "\n";
            }
    Output o("verify-smoothing", a.common);
    o.rows("verify-smoothing", header, rows);
    o.manifest(reg);
}

// --- resonance-scan -----------------------------------------------------------

struct ResonanceArgs {
    std::vector<std::string> cases{"high_low", "high_high_opposite", "high_high_same"};
    std::vector<double> alphas{0.25, 0.5, 1.0};
    long high = 64, low = 1;
    std::size_t samples = 10000;
    Common common;

    void add(Registry& reg) {
        reg.add("case", cases, "interaction cases");
        reg.add("alpha", alphas, "dispersion parameters");
        reg.add("N-high", high, "dyadic size of the high blocks");
        reg.add("N-low", low, "dyadic size of the low block");
        reg.add("samples", samples, "sampled pairs per case");
        common.add(reg);
    }
};

InteractionCase make_case(CaseKind k, long high, long low) {
    switch (k) {
        case CaseKind::HighLow: return {k, high, low, high};
        case CaseKind::HighHighOpposite: return {k, high, high, low};
        case CaseKind::HighHighSame: return {k, high, high, 2 * high};
    }
    return {};
}

void run_resonance(const ResonanceArgs& a, const Registry& reg, std::ostream& out) {
    const std::vector<std::string> header{"case", "alpha", "N1", "N2", "N", "samples", "min", "max", "mean", "spread"};
    std::vector<Row> rows;
    std::size_t cell = 0;
    for (const auto& name : a.cases) {
        const auto c = make_case(parse_case_kind(name), a.high, a.low);
        validate(c);
        for (double alpha : a.alphas) {
            const auto st = resonance_bound_ratio(c, alpha, a.samples, derive_seed(a.common.seed, cell++));
            const double spread = st.min > 0 ? st.max / st.min : infinity;
            rows.push_back({{"case", name},
                            {"alpha", alpha},
                            {"N1", static_cast<long long>(c.N1)},
                            {"N2", static_cast<long long>(c.N2)},
                            {"N", static_cast<long long>(c.N)},
                            {"samples", static_cast<long long>(st.n)},
                            {"min", st.min},
                            {"max", st.max},
                            {"mean", st.mean},
                            {"spread", spread}});
            out << name << " alpha=" << fmt("%g", alpha) << " min=" << fmt("%.4g", st.min) << " max="
                << fmt("%.4g", st.max) << " max/min=" << fmt("%.4g", spread) << "\n";
        }
    }
    Output o("resonance-scan", a.common);
    o.rows("resonance-scan", header, rows);
    o.manifest(reg);
}

// --- sweep / probe -------------------------------------------------------------

struct SweepArgs {
    std::vector<double> alphas{1.0}, rs{1.5}, offsets{0.5};
    double T = 0.1, amplitude = 0.01, band = 2.0, epsilon = 0.05, half_width = 8.0 * std::numbers::pi, tol = 1e-10;
    std::size_t nx = 128, nt = 256;
    int max_iters = 25;
    Common common;

    void add(Registry& reg) {
        reg.add("alpha", alphas, "dispersion parameters");
        reg.add("r", rs, "Fourier-Lebesgue exponents");
        reg.add("offset", offsets, "s - threshold(alpha, r)");
        reg.add("T", T, "local existence time");
        reg.add("amplitude", amplitude, "L2 norm of the seeded data");
        reg.add("band", band, "data supported in |xi| <= band");
        reg.add("b-epsilon", epsilon, "b = 1/r + eps, b' = -1/r' + 2 eps");
        reg.add("half-width", half_width, "spatial domain [-L, L)");
        reg.add("nx", nx, "spatial points");
        reg.add("nt", nt, "time points on [-2T, 2T)");
        reg.add("max-iters", max_iters, "iteration cap");
        reg.add("tol", tol, "residual tolerance");
        common.add(reg);
    }
};

void run_sweep(const SweepArgs& a, const Registry& reg, std::ostream& out) {
    SweepSpec spec;
    spec.alphas = a.alphas;
    spec.rs = a.rs;
    spec.s_offsets = a.offsets;
    spec.base.T = a.T;
    spec.base.epsilon = a.epsilon;
    spec.base.half_width = a.half_width;
    spec.base.n_x = a.nx;
    spec.base.n_t = a.nt;
    spec.base.max_picard_iters = a.max_iters;
    spec.base.picard_tol = a.tol;
    spec.amplitude = a.amplitude;
    spec.band = a.band;
    spec.seed = a.common.seed;
    validate(spec.base);
    const auto recs = threshold_sweep(spec);

    Output o("sweep", a.common);
    o.records("sweep", recs);
    std::vector<Series> series;
    for (const auto& r : recs) {
        Series s{"a=" + fmt("%g", r.alpha) + " r=" + fmt("%g", r.r) + " s=" + fmt("%.3g", r.s), {}, r.kappas};
        for (std::size_t i = 0; i < r.kappas.size(); ++i) s.x.push_back(static_cast<double>(i + 2));
        series.push_back(std::move(s));
        out << "alpha=" << fmt("%g", r.alpha) << " r=" << fmt("%g", r.r) << " s=" << fmt("%.6g", r.s)
            << " converged=" << (r.converged ? "yes" : "no");
        if (!r.kappas.empty())
            out << " max_kappa=" << fmt("%.4g", *std::max_element(r.kappas.begin(), r.kappas.end()));
        if (!r.error.empty()) out << " error=" << r.error;
        out << "\n";
    }
    o.file("sweep.svg", render_chart({"contraction factors", "iteration", "kappa", false, true, false}, series));
    o.manifest(reg);
}

struct ProbeArgs {
    long n_min = 16, n_max = 512;
    double alpha = 0.25, s = 0.0, t = 1.0;
    std::vector<double> rs{1.2, 2.0};
    int points = 16;
    bool low_only = false;
    Common common;

    void add(Registry& reg) {
        reg.add("N-min", n_min, "smallest high frequency");
        reg.add("N-max", n_max, "largest high frequency");
        reg.add("alpha", alpha, "dispersion parameter in (0, 1]");
        reg.add("s", s, "regularity");
        reg.add("r", rs, "exponents; r = 2 is the H^s row");
        reg.add("t", t, "time of the second iterate");
        reg.add("points-per-unit", points, "frequency lattice density");
        reg.flag("low-only", low_only, "drop the high bump");
        common.add(reg);
    }
};

void run_probe(const ProbeArgs& a, const Registry& reg, std::ostream& out) {
    ProbeSpec spec;
    spec.Ns = dyadic_range(a.n_min, a.n_max, "N range");
    spec.alpha = a.alpha;
    spec.s = a.s;
    spec.rs = a.rs;
    spec.t = a.t;
    spec.seed = a.common.seed;
    spec.include_high = !a.low_only;
    spec.points_per_unit = a.points;
    const auto recs = illposedness_probe(spec);

    Output o("probe-illposedness", a.common);
    o.records("probe-illposedness", recs);
    std::vector<Series> series;
    for (double r : a.rs) {
        Series s{(r == 2.0 ? std::string("H^s") : "FL^s_r r=" + fmt("%g", r)), {}, {}};
        for (const auto& rec : recs)
            if (rec.r == r) {
                s.x.push_back(static_cast<double>(rec.N));
                s.y.push_back(rec.ratio);
            }
        series.push_back(std::move(s));
    }
    o.file("probe-illposedness.svg",
           render_chart({"second iterate / data norm^2", "N", "ratio", true, true, false}, series));
    o.manifest(reg);
    for (const auto& r : recs)
        out << "N=" << r.N << " r=" << fmt("%g", r.r) << " ratio=" << fmt("%.6e", r.ratio) << " growth="
            << fmt("%.4f", r.growth) << (r.monotone ? " monotone" : "") << "\n";
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Pseudospectral lab for the dispersion-generalized Benjamin-Ono equation", "dgbo"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    auto* solve_cmd = app.add_subcommand("solve", "integrate the equation with the IFRK4 scheme");
    auto* picard_cmd = app.add_subcommand("picard", "Duhamel fixed-point iteration with X-hat contraction factors");
    auto* certify_cmd = app.add_subcommand("certify-bilinear", "dyadic bilinear estimate sweep");
    auto* linear_cmd = app.add_subcommand("verify-linear", "Strichartz and linear X-hat estimate ratios");
    auto* smooth_cmd = app.add_subcommand("verify-smoothing", "local smoothing identity check");
    auto* res_cmd = app.add_subcommand("resonance-scan", "|Omega| against the case lower bounds");
    auto* thr_cmd = app.add_subcommand("threshold", "print the regularity threshold");
    auto* sweep_cmd = app.add_subcommand("sweep", "Picard runs around the threshold");
    auto* probe_cmd = app.add_subcommand("probe-illposedness", "second Picard iterate for high x low data");

    Registry solve_reg(solve_cmd), picard_reg(picard_cmd), certify_reg(certify_cmd), linear_reg(linear_cmd),
        smooth_reg(smooth_cmd), res_reg(res_cmd), thr_reg(thr_cmd), sweep_reg(sweep_cmd), probe_reg(probe_cmd);
    SolveArgs solve_args;
    PicardArgs picard_args;
    CertifyArgs certify_args;
    LinearArgs linear_args;
    SmoothingArgs smooth_args;
    ResonanceArgs res_args;
    SweepArgs sweep_args;
    ProbeArgs probe_args;
    double thr_alpha = 1.0, thr_r = 1.5;
    solve_args.add(solve_reg);
    picard_args.add(picard_reg);
    certify_args.add(certify_reg);
    linear_args.add(linear_reg);
    smooth_args.add(smooth_reg);
    res_args.add(res_reg);
    thr_reg.add("alpha", thr_alpha, "dispersion parameter in (0, 1]");
    thr_reg.add("r", thr_r, "exponent in (1, 1 + alpha)");
    sweep_args.add(sweep_reg);
    probe_args.add(probe_reg);

    if (!args.empty() && args[0].rfind("-", 0) != 0 && !app.get_subcommand_no_throw(args[0])) {
        err << "unknown subcommand '" << args[0] << "'\n" << app.help();
        return 2;
    }
    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
        return 0;
    } catch (const CLI::CallForVersion&) {
        out << kVersion << "\n";
        return 0;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n" << app.help();
        return 2;
    }

    try {
        CLI::App* cmd = app.get_subcommands().front();
        if (cmd == solve_cmd) {
            solve_reg.apply_config();
            run_solve(solve_args, solve_reg, out);
        } else if (cmd == picard_cmd) {
            picard_reg.apply_config();
            run_picard(picard_args, picard_reg, out);
        } else if (cmd == certify_cmd) {
            certify_reg.apply_config();
            run_certify(certify_args, certify_reg, out);
        } else if (cmd == linear_cmd) {
            linear_reg.apply_config();
            run_verify_linear(linear_args, linear_reg, out);
        } else if (cmd == smooth_cmd) {
            smooth_reg.apply_config();
            run_verify_smoothing(smooth_args, smooth_reg, out);
        } else if (cmd == res_cmd) {
            res_reg.apply_config();
            run_resonance(res_args, res_reg, out);
        } else if (cmd == thr_cmd) {
            thr_reg.apply_config();
            out << fmt("%.10g", threshold(thr_alpha, thr_r)) << "\n";
        } else if (cmd == sweep_cmd) {
            sweep_reg.apply_config();
            run_sweep(sweep_args, sweep_reg, out);
        } else if (cmd == probe_cmd) {
            probe_reg.apply_config();
            run_probe(probe_args, probe_reg, out);
        }
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace dgbo
