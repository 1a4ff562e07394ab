// shadowlab: numerical ranges and shadows of complex matrices.
//
// Subcommands: range, shadow, mixed-shadow, normalize, dynamics, spaces,
// rand-law, selftest. Runs are reproducible: outputs depend only on the
// recorded flags (seed and thread count included), and every output comes
// with a JSON manifest sufficient to replay it.

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "shadowlab/shadowlab.hpp"

using namespace shadowlab;
using nlohmann::json;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitContract = 3;

struct ContractViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::string hash_hex(std::uint64_t h) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016" PRIx64, h);
    return buf;
}

unsigned resolve_threads(unsigned flag_value) {
    if (flag_value > 0) return flag_value;
    if (const char* env = std::getenv("SHADOWLAB_THREADS")) {
        const long v = std::atol(env);
        if (v > 0) return static_cast<unsigned>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

json manifest_base(const std::string& subcommand, const json& flags) {
    return {{"tool", "shadowlab"},
            {"version", version},
            {"subcommand", subcommand},
            {"flags", flags}};
}

void write_text(const std::string& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write output file: " + path);
    out << body;
}

std::pair<std::size_t, std::size_t> parse_bins(const std::string& spec) {
    const auto x = spec.find('x');
    if (x == std::string::npos) throw CLI::ValidationError("--bins", "expected RxI, e.g. 256x256");
    const long br = std::atol(spec.substr(0, x).c_str());
    const long bi = std::atol(spec.substr(x + 1).c_str());
    if (br < 1 || bi < 1) throw CLI::ValidationError("--bins", "bin counts must be positive");
    return {static_cast<std::size_t>(br), static_cast<std::size_t>(bi)};
}

std::vector<cplx> parse_state(const std::string& spec) {
    std::vector<double> vals;
    std::stringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            std::size_t pos = 0;
            const double v = std::stod(tok, &pos);
            if (pos != tok.size()) throw std::invalid_argument(tok);
            vals.push_back(v);
        } catch (const std::exception&) {
            throw CLI::ValidationError("--state", "expected comma-separated re,im pairs");
        }
    }
    if (vals.empty() || vals.size() % 2 != 0)
        throw CLI::ValidationError("--state", "expected an even number of components");
    std::vector<cplx> amps(vals.size() / 2);
    for (std::size_t i = 0; i < amps.size(); ++i) amps[i] = cplx(vals[2 * i], vals[2 * i + 1]);
    return amps;
}

struct SectionSpec {
    cplx point;
    cplx dir;
    double half_width;
};

SectionSpec parse_section(const std::string& spec) {
    std::vector<double> v;
    std::stringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ',')) v.push_back(std::atof(tok.c_str()));
    if (v.size() != 5 || (v[2] == 0.0 && v[3] == 0.0) || v[4] <= 0.0)
        throw CLI::ValidationError("--section", "expected x0,y0,dx,dy,halfwidth");
    const double n = std::hypot(v[2], v[3]);
    return {cplx(v[0], v[1]), cplx(v[2] / n, v[3] / n), v[4]};
}

std::string histogram_csv(const ShadowHistogram& h) {
    std::string out = "re_center,im_center,density\n";
    for (std::size_t iy = 0; iy < h.bins_im; ++iy)
        for (std::size_t ix = 0; ix < h.bins_re; ++ix) {
            const cplx c = h.bin_center(ix, iy);
            out += fmt17(c.real());
            out += ',';
            out += fmt17(c.imag());
            out += ',';
            out += fmt17(h.density(ix, iy));
            out += '\n';
        }
    return out;
}

// Binary 16-bit PGM (big-endian samples), max-normalized; optional log scale.
// Row 0 is the top of the image (largest imaginary part).
std::string histogram_pgm(const ShadowHistogram& h, bool log_scale) {
    std::uint64_t peak = 0;
    for (std::uint64_t c : h.counts) peak = std::max(peak, c);
    const double denom =
        log_scale ? std::log1p(static_cast<double>(peak)) : static_cast<double>(peak);
    std::string out = "P5\n" + std::to_string(h.bins_re) + " " + std::to_string(h.bins_im) +
                      "\n65535\n";
    out.reserve(out.size() + 2 * h.counts.size());
    for (std::size_t row = 0; row < h.bins_im; ++row) {
        const std::size_t iy = h.bins_im - 1 - row;
        for (std::size_t ix = 0; ix < h.bins_re; ++ix) {
            const std::uint64_t c = h.counts[iy * h.bins_re + ix];
            unsigned value = 0;
            if (peak > 0) {
                const double t = log_scale ? std::log1p(static_cast<double>(c)) / denom
                                           : static_cast<double>(c) / denom;
                value = static_cast<unsigned>(t * 65535.0 + 0.5);
            }
            out += static_cast<char>((value >> 8) & 0xff);
            out += static_cast<char>(value & 0xff);
        }
    }
    return out;
}

json histogram_meta(const ShadowHistogram& h, const ShadowMoments& m) {
    json j = {{"box",
               {{"re_min", h.re_min},
                {"re_max", h.re_max},
                {"im_min", h.im_min},
                {"im_max", h.im_max}}},
              {"bins", {h.bins_re, h.bins_im}},
              {"samples", h.samples},
              {"segment", h.segment},
              {"moments",
               {{"mean", {m.mean.real(), m.mean.imag()}},
                {"var_re", m.var_re},
                {"var_im", m.var_im},
                {"cov_reim", m.cov_reim}}}};
    if (h.segment)
        j["segment_line"] = {{"origin", {h.seg_origin.real(), h.seg_origin.imag()}},
                             {"dir", {h.seg_dir.real(), h.seg_dir.imag()}}};
    return j;
}

/// Occupied bins must sit inside the numerical range (up to the bin
/// half-diagonal); a violation means the sampler or binning is broken.
void check_shadow_contract(const ComplexMatrix& a, const ShadowHistogram& h) {
    const RangeBoundary rb = boundary(a, 720);
    const double halfdiag = h.segment ? 0.5 * h.bin_width_re()
                                      : 0.5 * std::hypot(h.bin_width_re(), h.bin_width_im());
    for (std::size_t iy = 0; iy < h.bins_im; ++iy)
        for (std::size_t ix = 0; ix < h.bins_re; ++ix)
            if (h.counts[iy * h.bins_re + ix] > 0 &&
                !contains(rb, h.bin_center(ix, iy), halfdiag + 1e-8))
                throw ContractViolation("shadow bin outside the numerical range");
}

template <class Sampler>
int run_shadow_like(const std::string& subcommand, const ComplexMatrix& a,
                    const Sampler& sampler, std::uint64_t samples, std::size_t bins_re,
                    std::size_t bins_im, std::uint64_t seed, unsigned threads,
                    const std::string& out_prefix, const std::string& format, bool log_scale,
                    const std::optional<SectionSpec>& section, std::size_t section_bins,
                    json flags) {
    const ShadowBox box = shadow_box(a);
    ShadowHistogram hist;
    ShadowMoments moments;
    if (box.segment) {
        PairAccum<SegmentHistogramAccum, MomentsAccum> acc(
            SegmentHistogramAccum(box.origin, box.dir, box.re_min, box.re_max, bins_re),
            MomentsAccum{});
        auto res = parallel_sample(samples, threads, seed, sampler, acc);
        hist = res.first.take();
        moments = moments_from(res.second);
    } else {
        PairAccum<Histogram2DAccum, MomentsAccum> acc(
            Histogram2DAccum(box.re_min, box.re_max, box.im_min, box.im_max, bins_re, bins_im),
            MomentsAccum{});
        auto res = parallel_sample(samples, threads, seed, sampler, acc);
        hist = res.first.take();
        moments = moments_from(res.second);
    }
    check_shadow_contract(a, hist);

    const bool want_csv = format.find("csv") != std::string::npos;
    const bool want_pgm = format.find("pgm") != std::string::npos;
    if (want_csv) write_text(out_prefix + ".csv", histogram_csv(hist));
    if (want_pgm && !hist.segment) write_text(out_prefix + ".pgm", histogram_pgm(hist, log_scale));

    json meta = histogram_meta(hist, moments);
    meta["matrix_hash"] = hash_hex(matrix_content_hash(a));
    meta["manifest"] = manifest_base(subcommand, flags);

    if (section) {
        StripAccum acc(section->point, section->dir, section->half_width);
        StripAccum res =
            parallel_sample(samples, threads, derive_seed(seed, 0x5ec), sampler, acc);
        CrossSection cs =
            cross_section_from_arclengths(std::move(res.arclengths), section->point,
                                          section->dir, section->half_width, section_bins,
                                          res.total());
        std::string csv = "s_center,density\n";
        for (std::size_t i = 0; i < cs.density.size(); ++i) {
            csv += fmt17(0.5 * (cs.bin_edges[i] + cs.bin_edges[i + 1]));
            csv += ',';
            csv += fmt17(cs.density[i]);
            csv += '\n';
        }
        write_text(out_prefix + ".section.csv", csv);
        meta["section"] = {{"point", {section->point.real(), section->point.imag()}},
                           {"dir", {section->dir.real(), section->dir.imag()}},
                           {"half_width", section->half_width},
                           {"strip_samples", cs.strip_samples},
                           {"total_samples", cs.total_samples}};
    }
    write_text(out_prefix + ".json", meta.dump(1) + "\n");
    return 0;
}

int cmd_range(const std::string& matrix_arg, std::size_t resolution,
              const std::string& out_prefix) {
    const ComplexMatrix a = parse_matrix(matrix_arg);
    const RangeBoundary rb = boundary(a, resolution);
    const std::vector<FlatPart> flats = flat_parts(rb);

    json flags = {{"matrix", matrix_arg}, {"resolution", resolution}, {"out", out_prefix}};
    json summary;
    const cplx bary = a.trace() / static_cast<double>(a.order());
    summary["flat_parts"] = flats.size();
    summary["barycenter"] = {bary.real(), bary.imag()};
    double radius_bound = 0.0;
    if (!is_scalar_multiple_of_identity(a))
        radius_bound = normalization_constants(a).alpha * out_sphere_radius(a.order());
    summary["radius_bound"] = radius_bound;
    summary["matrix_hash"] = hash_hex(matrix_content_hash(a));
    summary["manifest"] = manifest_base("range", flags);

    if (!out_prefix.empty()) {
        std::string csv = "theta,h,re,im\n";
        for (std::size_t k = 0; k < rb.angles.size(); ++k) {
            csv += fmt17(rb.angles[k]);
            csv += ',';
            csv += fmt17(rb.support_values[k]);
            csv += ',';
            csv += fmt17(rb.points[k].real());
            csv += ',';
            csv += fmt17(rb.points[k].imag());
            csv += '\n';
        }
        write_text(out_prefix + ".csv", csv);
        write_text(out_prefix + ".json", summary.dump(1) + "\n");
    }
    std::cout << summary.dump(1) << "\n";
    return 0;
}

int cmd_normalize(const std::string& matrix_arg, const std::string& out_prefix) {
    const ComplexMatrix a = parse_matrix(matrix_arg);
    const CenteredForm f = normalization_constants(a);
    json flags = {{"matrix", matrix_arg}, {"out", out_prefix}};
    json j = {{"d", f.d},
              {"alpha", f.alpha},
              {"c1", f.c1},
              {"c2", f.c2},
              {"gamma1", f.gamma1},
              {"gamma2", f.gamma2},
              {"matrix_hash", hash_hex(matrix_content_hash(a))},
              {"manifest", manifest_base("normalize", flags)}};
    if (!out_prefix.empty()) {
        write_matrix_file(out_prefix + ".v1.json", f.v1);
        write_matrix_file(out_prefix + ".v2.json", f.v2);
        write_text(out_prefix + ".json", j.dump(1) + "\n");
    }
    std::cout << j.dump(1) << "\n";
    return 0;
}

int cmd_dynamics(const std::string& matrix_arg, const std::string& hamiltonian_arg,
                 const std::string& state_arg, double tmax, std::size_t steps,
                 bool reverse_time, const std::string& out_prefix) {
    const ComplexMatrix a = parse_matrix(matrix_arg);
    const ComplexMatrix h = parse_matrix(hamiltonian_arg);
    if (!is_hermitian(h, 1e-12 * std::max(1.0, hs_norm(h))))
        throw DomainError("dynamics: the Hamiltonian must be Hermitian");
    if (steps < 1) throw DomainError("dynamics: need at least one step");

    std::vector<cplx> amps;
    if (state_arg.empty()) {
        amps.assign(a.order(), cplx(0.0, 0.0));
        amps[0] = 1.0;
    } else {
        amps = parse_state(state_arg);
    }
    if (amps.size() != a.order()) throw DomainError("dynamics: state dimension mismatch");
    double nrm = 0.0;
    for (const cplx& c : amps) nrm += std::norm(c);
    if (nrm <= 0.0) throw DomainError("dynamics: zero state");
    for (cplx& c : amps) c /= std::sqrt(nrm);
    const PureState psi0{a.order(), amps};

    std::vector<double> times(steps + 1);
    for (std::size_t k = 0; k <= steps; ++k)
        times[k] = tmax * static_cast<double>(k) / static_cast<double>(steps);
    const Trajectory tr = trajectory(a, h, psi0, times, reverse_time);

    const RangeBoundary rb = boundary(a, 720);
    for (const cplx& z : tr.points)
        if (!contains(rb, z, 1e-8))
            throw ContractViolation("trajectory point outside the numerical range");

    json flags = {{"matrix", matrix_arg},
                  {"hamiltonian", hamiltonian_arg},
                  {"state", state_arg},
                  {"tmax", tmax},
                  {"steps", steps},
                  {"reverse_time", reverse_time},
                  {"out", out_prefix}};
    json j = {{"matrix_hash", hash_hex(matrix_content_hash(a))},
              {"hamiltonian_hash", hash_hex(matrix_content_hash(h))},
              {"points", tr.points.size()},
              {"manifest", manifest_base("dynamics", flags)}};
    auto per = period(h);
    if (per)
        j["period"] = *per;
    else
        j["period"] = nullptr;

    std::string csv = "t,re,im\n";
    for (std::size_t k = 0; k < times.size(); ++k) {
        csv += fmt17(tr.times[k]);
        csv += ',';
        csv += fmt17(tr.points[k].real());
        csv += ',';
        csv += fmt17(tr.points[k].imag());
        csv += '\n';
    }
    if (!out_prefix.empty()) {
        write_text(out_prefix + ".csv", csv);
        write_text(out_prefix + ".json", j.dump(1) + "\n");
    } else {
        std::cout << csv;
    }
    std::cout << j.dump(1) << "\n";
    return 0;
}

int cmd_spaces(const std::string& matrix_arg, const std::string& out_prefix) {
    const ComplexMatrix a = parse_matrix(matrix_arg);
    const TrajectorySpaces sp = trajectory_spaces(a);
    json flags = {{"matrix", matrix_arg}, {"out", out_prefix}};
    json j = {{"dim_xa", sp.dim_xa},
              {"dim_ha", sp.dim_ha},
              {"d_a", sp.d_a},
              {"matrix_hash", hash_hex(matrix_content_hash(a))},
              {"manifest", manifest_base("spaces", flags)}};
    std::cout << j.dump(1) << "\n";
    if (!out_prefix.empty()) {
        json xa = json::array(), ha = json::array();
        for (const ComplexMatrix& x : sp.xa_basis) xa.push_back(matrix_to_json(x));
        for (const ComplexMatrix& hm : sp.ha_basis) ha.push_back(matrix_to_json(hm));
        j["xa_basis"] = std::move(xa);
        j["ha_basis"] = std::move(ha);
        write_text(out_prefix + ".json", j.dump(1) + "\n");
    }
    return 0;
}

struct DiagSampler {
    std::size_t n, k;
    cplx operator()(RngStream& rng) {
        double row1 = 0.0, total = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t c = 0; c < k; ++c) {
                const double w = std::norm(rng.gauss_complex());
                total += w;
                if (i == 0) row1 += w;
            }
        return {row1 / total, 0.0};
    }
};

struct OverlapSampler {
    std::size_t n;
    cplx operator()(RngStream& rng) {
        const ComplexMatrix u = random_haar_unitary(n, rng);
        return {std::norm(u(0, 0)), 0.0};
    }
};

int cmd_rand_law(const std::string& which, int n, int k, std::uint64_t samples,
                 std::uint64_t seed, unsigned threads) {
    BetaLaw law{};
    CollectAccum res;
    if (which == "density") {
        law = density_diag_law(n, k);
        res = parallel_sample(samples, threads, seed,
                              DiagSampler{static_cast<std::size_t>(n),
                                          static_cast<std::size_t>(k)},
                              CollectAccum{});
    } else if (which == "unitary") {
        law = unitary_overlap_law(n);
        res = parallel_sample(samples, threads, seed,
                              OverlapSampler{static_cast<std::size_t>(n)}, CollectAccum{});
    } else {
        throw CLI::ValidationError("--which", "expected density or unitary");
    }
    std::vector<double> xs;
    xs.reserve(res.values.size());
    for (const cplx& z : res.values) xs.push_back(z.real());

    const KsResult ks =
        ks_test(xs, [&](double r) { return beta_cdf(law, std::clamp(r, 0.0, 1.0)); });
    const double threshold = 5.0 / std::sqrt(static_cast<double>(samples));
    const bool pass = ks.statistic < threshold;
    json flags = {{"which", which},     {"n", n},       {"k", k},
                  {"samples", samples}, {"seed", seed}, {"threads", threads}};
    json j = {{"law", {{"a", law.a}, {"b", law.b}}},
              {"ks_statistic", ks.statistic},
              {"threshold", threshold},
              {"pass", pass},
              {"manifest", manifest_base("rand-law", flags)}};
    std::cout << j.dump(1) << "\n";
    return pass ? 0 : kExitContract;
}

int cmd_selftest(std::uint64_t seed) {
    int failures = 0;
    auto report = [&failures](const char* name, bool ok) {
        std::printf("%s %s\n", ok ? "ok  " : "FAIL", name);
        if (!ok) ++failures;
    };

    {
        bool ok = true;
        for (const std::string& name : builtin_names()) {
            const ComplexMatrix& m = builtin_matrix(name);
            ok = ok && std::abs(normalization_constants(natural_rescale(m)).alpha - 1.0) < 1e-12;
        }
        report("registry natural rescale reaches alpha = 1", ok);
    }
    {
        bool ok = true;
        RngStream rng(seed, 1);
        for (int rep = 0; rep < 100 && ok; ++rep) {
            const std::size_t n = 2 + static_cast<std::size_t>(rng.next_u64() % 11);
            ComplexMatrix g(n);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) g(i, j) = rng.gauss_complex();
            ComplexMatrix h = 0.5 * cplx(1.0, 0.0) * (g + g.adjoint());
            EigenSystem es = eigh(h);
            ComplexMatrix v = es.eigenvectors;
            ok = ok && hs_norm(v.adjoint() * v - ComplexMatrix::identity(n)) < 1e-11;
            ComplexMatrix hv = h * v;
            for (std::size_t c = 0; c < n && ok; ++c) {
                double r2 = 0.0;
                for (std::size_t i = 0; i < n; ++i)
                    r2 += std::norm(hv(i, c) - es.eigenvalues[c] * v(i, c));
                ok = std::sqrt(r2) < 1e-10 * std::max(1.0, hs_norm(h));
            }
        }
        report("hermitian eigensolver residuals", ok);
    }
    {
        std::vector<cplx> zs =
            raw_samples(PureShadowSampler(ComplexMatrix::diagonal({0.0, 1.0})), 200000,
                        derive_seed(seed, 2), 2);
        const KsResult ks =
            ks_test(component(zs, false), [](double x) { return std::clamp(x, 0.0, 1.0); });
        report("projector shadow is uniform", ks.statistic < 0.012);
    }
    {
        RngStream rng(seed, 3);
        std::vector<double> xs(100000);
        for (double& x : xs) x = std::norm(random_haar_unitary(3, rng)(0, 0));
        const BetaLaw law = unitary_overlap_law(3);
        const KsResult ks = ks_test(xs, [&](double r) { return beta_cdf(law, r); });
        report("haar overlap law", ks.statistic < 0.015);
    }
    {
        RngStream rng(seed, 4);
        std::vector<double> xs(100000);
        for (double& x : xs) x = random_induced_density(2, 2, rng).matrix(0, 0).real();
        const BetaLaw law = density_diag_law(2, 2);
        const KsResult ks = ks_test(xs, [&](double r) { return beta_cdf(law, r); });
        report("induced-measure diagonal law", ks.statistic < 0.015);
    }
    {
        ShadowHistogram h1 = pure_shadow(builtin_matrix("A3_0"), 30000, 32, 32, 7, 4);
        ShadowHistogram h2 = pure_shadow(builtin_matrix("A3_0"), 30000, 32, 32, 7, 4);
        report("shadow determinism", h1.counts == h2.counts);
    }
    {
        bool ok = true;
        const std::size_t want[4] = {0, 1, 2, 3};
        const char* names[4] = {"A3_0", "A3_1", "A3_2", "A3_3"};
        for (int i = 0; i < 4; ++i)
            ok = ok && flat_parts(boundary(builtin_matrix(names[i]), 2048)).size() == want[i];
        report("range flat-part classes", ok);
    }
    {
        ComplexMatrix a = builtin_matrix("D_A2");
        ComplexMatrix h = builtin_matrix("H21");
        PureState psi0{3, {1.0, 0.0, 0.0}};
        std::vector<double> times;
        for (int k = 0; k < 64; ++k) times.push_back(0.1 * k);
        Trajectory t1 = trajectory(a, h, psi0, times);
        Trajectory t2 = trajectory_heisenberg(a, h, psi0, times);
        RangeBoundary rb = boundary(a, 720);
        bool ok = true;
        for (std::size_t k = 0; k < times.size(); ++k) {
            ok = ok && std::abs(t1.points[k] - t2.points[k]) < 1e-11;
            ok = ok && contains(rb, t1.points[k], 1e-8);
        }
        report("trajectory pictures agree and stay in range", ok);
    }
    {
        const bool ok = std::abs(beta_cdf({1, 1}, 0.3) - 0.3) < 1e-13 &&
                        std::abs(beta_cdf({2, 2}, 0.5) - 0.5) < 1e-13;
        report("beta cdf spot values", ok);
    }
    {
        RngStream rng(seed, 5);
        bool ok = true;
        for (int rep = 0; rep < 100 && ok; ++rep) {
            ComplexMatrix g(3);
            for (std::size_t i = 0; i < 3; ++i)
                for (std::size_t j = 0; j < 3; ++j) g(i, j) = rng.gauss_complex();
            CenteredForm f = normalization_constants(g);
            ok = std::abs(hs_norm(f.v1) - 1.0) < 1e-11 &&
                 std::abs(hs_norm(f.v2) - 1.0) < 1e-11 &&
                 std::abs(hs_inner(f.v1, f.v2)) < 1e-11;
        }
        report("plane frames are orthonormal", ok);
    }

    if (failures) {
        std::printf("selftest: %d check(s) failed\n", failures);
        return kExitContract;
    }
    std::printf("selftest: all checks passed\n");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical ranges and shadows of complex matrices"};
    app.require_subcommand(1);

    auto* range_cmd = app.add_subcommand("range", "sample the numerical range boundary");
    std::string rg_matrix, rg_out;
    std::size_t rg_resolution = 720;
    range_cmd->add_option("--matrix,--builtin", rg_matrix, "matrix file or builtin name")
        ->required();
    range_cmd->add_option("--resolution", rg_resolution, "number of support angles");
    range_cmd->add_option("--out", rg_out, "output prefix (.csv/.json)");

    auto add_shadow_flags = [](CLI::App* cmd, std::string& matrix, std::uint64_t& samples,
                               std::string& bins, std::uint64_t& seed, unsigned& threads,
                               std::string& out, std::string& format, bool& log_scale,
                               std::string& section, std::size_t& section_bins) {
        cmd->add_option("--matrix,--builtin", matrix, "matrix file or builtin name")->required();
        cmd->add_option("--samples", samples, "number of Monte Carlo samples");
        cmd->add_option("--bins", bins, "histogram bins, RxI");
        cmd->add_option("--seed", seed, "rng seed");
        cmd->add_option("--threads", threads, "worker streams (0 = auto)");
        cmd->add_option("--out", out, "output prefix (.csv/.pgm/.json)")->required();
        cmd->add_option("--format", format, "outputs to write: csv,pgm");
        cmd->add_flag("--log", log_scale, "log-scale the pgm");
        cmd->add_option("--section", section, "cross-section line x0,y0,dx,dy,halfwidth");
        cmd->add_option("--section-bins", section_bins, "cross-section bins");
    };
    auto* shadow_cmd = app.add_subcommand("shadow", "pure-state numerical shadow");
    std::string sh_matrix, sh_bins = "256x256", sh_out, sh_format = "csv,pgm", sh_section;
    std::uint64_t sh_samples = 1000000, sh_seed = 0;
    unsigned sh_threads = 0;
    bool sh_log = false;
    std::size_t sh_section_bins = 64;
    add_shadow_flags(shadow_cmd, sh_matrix, sh_samples, sh_bins, sh_seed, sh_threads, sh_out,
                     sh_format, sh_log, sh_section, sh_section_bins);

    auto* mixed_cmd = app.add_subcommand("mixed-shadow", "induced-measure mixed-state shadow");
    std::string mx_matrix, mx_bins = "256x256", mx_out, mx_format = "csv,pgm", mx_section;
    std::uint64_t mx_samples = 1000000, mx_seed = 0;
    unsigned mx_threads = 0;
    bool mx_log = false;
    std::size_t mx_section_bins = 64;
    std::size_t mx_ancilla = 0;
    add_shadow_flags(mixed_cmd, mx_matrix, mx_samples, mx_bins, mx_seed, mx_threads, mx_out,
                     mx_format, mx_log, mx_section, mx_section_bins);
    mixed_cmd->add_option("--ancilla", mx_ancilla, "ancilla dimension K (0 = N)");

    auto* norm_cmd = app.add_subcommand("normalize", "centering and plane-frame constants");
    std::string nm_matrix, nm_out;
    norm_cmd->add_option("--matrix,--builtin", nm_matrix, "matrix file or builtin name")
        ->required();
    norm_cmd->add_option("--out", nm_out, "output prefix (.v1.json/.v2.json/.json)");

    auto* dyn_cmd = app.add_subcommand("dynamics", "unitary trajectory of an observable");
    std::string dy_matrix, dy_ham, dy_state, dy_out;
    double dy_tmax = 10.0;
    std::size_t dy_steps = 1000;
    bool dy_reverse = false;
    dyn_cmd->add_option("--matrix,--builtin", dy_matrix, "observable file or builtin name")
        ->required();
    dyn_cmd->add_option("--hamiltonian", dy_ham, "Hamiltonian file or builtin name")->required();
    dyn_cmd->add_option("--state", dy_state, "initial state re,im,... (default basis state 0)");
    dyn_cmd->add_option("--tmax", dy_tmax, "final time");
    dyn_cmd->add_option("--steps", dy_steps, "number of time steps");
    dyn_cmd->add_flag("--reverse-time", dy_reverse, "use the reversed conjugation convention");
    dyn_cmd->add_option("--out", dy_out, "output prefix (.csv/.json)");

    auto* sp_cmd = app.add_subcommand("spaces", "trajectory-identity subspaces of an operator");
    std::string sp_matrix, sp_out;
    sp_cmd->add_option("--matrix,--builtin", sp_matrix, "matrix file or builtin name")
        ->required();
    sp_cmd->add_option("--out", sp_out, "write basis matrices to this prefix");

    auto* rl_cmd = app.add_subcommand("rand-law", "closed-form random-matrix shadow laws");
    std::string rl_which = "density";
    int rl_n = 2, rl_k = 1;
    std::uint64_t rl_samples = 1000000, rl_seed = 0;
    unsigned rl_threads = 0;
    rl_cmd->add_option("--which", rl_which, "density or unitary")->required();
    rl_cmd->add_option("--n", rl_n, "system dimension N")->required();
    rl_cmd->add_option("--k", rl_k, "ancilla dimension K (density law)");
    rl_cmd->add_option("--samples", rl_samples, "number of draws");
    rl_cmd->add_option("--seed", rl_seed, "rng seed");
    rl_cmd->add_option("--threads", rl_threads, "worker streams (0 = auto)");

    auto* st_cmd = app.add_subcommand("selftest", "fast invariant suite");
    std::uint64_t st_seed = 99;
    st_cmd->add_option("--seed", st_seed, "rng seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (range_cmd->parsed()) return cmd_range(rg_matrix, rg_resolution, rg_out);
        if (shadow_cmd->parsed()) {
            const auto [br, bi] = parse_bins(sh_bins);
            const unsigned threads = resolve_threads(sh_threads);
            std::optional<SectionSpec> section;
            if (!sh_section.empty()) section = parse_section(sh_section);
            const ComplexMatrix a = parse_matrix(sh_matrix);
            json flags = {{"matrix", sh_matrix}, {"samples", sh_samples}, {"bins", sh_bins},
                          {"seed", sh_seed},     {"threads", threads},    {"out", sh_out},
                          {"format", sh_format}, {"log", sh_log},         {"section", sh_section}};
            return run_shadow_like("shadow", a, PureShadowSampler(a), sh_samples, br, bi,
                                   sh_seed, threads, sh_out, sh_format, sh_log, section,
                                   sh_section_bins, flags);
        }
        if (mixed_cmd->parsed()) {
            const auto [br, bi] = parse_bins(mx_bins);
            const unsigned threads = resolve_threads(mx_threads);
            std::optional<SectionSpec> section;
            if (!mx_section.empty()) section = parse_section(mx_section);
            const ComplexMatrix a = parse_matrix(mx_matrix);
            const std::size_t ancilla = mx_ancilla > 0 ? mx_ancilla : a.order();
            json flags = {{"matrix", mx_matrix}, {"samples", mx_samples}, {"bins", mx_bins},
                          {"seed", mx_seed},     {"threads", threads},    {"out", mx_out},
                          {"format", mx_format}, {"log", mx_log},         {"section", mx_section},
                          {"ancilla", ancilla}};
            return run_shadow_like("mixed-shadow", a, MixedShadowSampler(a, ancilla),
                                   mx_samples, br, bi, mx_seed, threads, mx_out, mx_format,
                                   mx_log, section, mx_section_bins, flags);
        }
        if (norm_cmd->parsed()) return cmd_normalize(nm_matrix, nm_out);
        if (dyn_cmd->parsed())
            return cmd_dynamics(dy_matrix, dy_ham, dy_state, dy_tmax, dy_steps, dy_reverse,
                                dy_out);
        if (sp_cmd->parsed()) return cmd_spaces(sp_matrix, sp_out);
        if (rl_cmd->parsed())
            return cmd_rand_law(rl_which, rl_n, rl_k, rl_samples, rl_seed,
                                resolve_threads(rl_threads));
        if (st_cmd->parsed()) return cmd_selftest(st_seed);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ContractViolation& e) {
        std::cerr << "contract violation: " << e.what() << "\n";
        return kExitContract;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
    return kExitUsage;
}
