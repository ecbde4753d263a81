#include "corrtomo/runner.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <thread>
#include <vector>

#include <json.hpp>

#include "corrtomo/analysis.hpp"
#include "corrtomo/crystal.hpp"
#include "corrtomo/fockstats.hpp"
#include "corrtomo/tomography.hpp"
#include "corrtomo/units.hpp"

namespace corrtomo {

namespace {

std::vector<double> delay_grid(const ScanBlock& scan) {
    std::vector<double> d(scan.n_delays);
    const double w = scan.delay_window_fs;
    for (int i = 0; i < scan.n_delays; ++i)
        d[i] = units::fs_to_s(-w + 2.0 * w * i / (scan.n_delays - 1));
    return d;
}

Eigen::VectorXd build_lo(const ModeBasis& basis, const SpectrumConfig& s) {
    const double sigma = units::thz_to_angular(s.sigma_thz);
    const double k = s.k;
    return lo_vector(basis, [sigma, k](double w) {
        return std::complex<double>(fundamental_spectrum(sigma, k, w), 0.0);
    });
}

Eigen::MatrixXd crystal_transform(const ModeBasisParams& bp, const CrystalBlock& blk,
                                  double alpha) {
    NonlinearCouplings nc =
        discretize_couplings(bp, crystal_config(blk), probe_spectrum(blk.probe));
    return nl_symplectic(nl_generator(nc), alpha).mat();
}

GaussianState build_state(const Config& cfg, const ModeBasis& basis) {
    const StateBlock& st = cfg.state;
    if (st.kind == "vacuum" || st.kind == "fock") return vacuum(basis.n_modes());
    if (st.kind == "thermal") return thermal_state(st.temperature_k, basis);
    if (st.kind == "mmsv")
        return multimode_squeezed_vacuum(
            crystal_transform(basis.params(), st.gx, st.alpha_gx));
    // smsv: broadband quadrature pair from the configured temporal mode
    const SpectrumConfig mode = st.mode.value_or(cfg.lo.value_or(cfg.basis));
    FockStateSpec spec{0, units::thz_to_angular(mode.sigma_thz), mode.k};
    Eigen::VectorXd c = fock_mode_coefficients(spec, basis);
    const int N = basis.n_modes();
    Eigen::VectorXd zx = Eigen::VectorXd::Zero(2 * N), zp = Eigen::VectorXd::Zero(2 * N);
    zx.head(N) = c;
    zp.tail(N) = c;
    return single_mode_squeezed(st.sigma_x, st.sigma_p, zx, zp);
}

// deterministic parallel map over [0, n): results land by index, so the
// output is independent of scheduling
template <typename F>
void parallel_for(int n, int threads, F&& body) {
    const int workers = std::max(1, std::min(threads, n));
    if (workers == 1) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) body(i);
        });
    for (auto& t : pool) t.join();
}

std::string join(const std::string& dir, const std::string& name) {
    if (dir.empty() || dir == ".") return name;
    return dir + "/" + name;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("runner: cannot open " + path);
    out << text;
}

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

Experiment build_experiment(const Config& cfg) {
    ModeBasis basis(basis_params(cfg));
    Eigen::VectorXd zeta = build_lo(basis, cfg.lo.value_or(cfg.basis));
    std::optional<Eigen::MatrixXd> mnl;
    if (cfg.crystal && cfg.crystal->alpha != 0.0)
        mnl = crystal_transform(basis.params(), *cfg.crystal, cfg.crystal->alpha);
    MeasurementContext ctx(basis, std::move(zeta), std::move(mnl), cfg.scan.dphi_sign);
    GaussianState state = build_state(cfg, basis);
    return {std::move(basis), std::move(ctx), std::move(state)};
}

void run_correlation_scan(const Config& cfg, const RunContext& rc) {
    if (cfg.state.kind == "fock")
        throw ConfigError("scan: state.kind fock is not a Gaussian state; use the fock verb");
    Experiment ex = build_experiment(cfg);
    const std::vector<double> delays = delay_grid(cfg.scan);
    const int n = static_cast<int>(delays.size());

    CorrelationDataset ds;
    for (double d : delays) ds.gamma.push_back({d, 0.0});
    ds.signal.resize(n, n);
    ds.corr.resize(n, n);

    if (cfg.scan.draws == 0) {
        GaussianState vac = vacuum(ex.basis.n_modes());
        parallel_for(n, rc.threads, [&](int i) {
            for (int j = 0; j < n; ++j) {
                const MeasurementSetting sa{delays[i], 0.0}, sb{delays[j], 0.0};
                ds.signal(i, j) = correlation_signal(ex.state, ex.ctx, sa, sb);
                ds.corr(i, j) =
                    ds.signal(i, j) - correlation_signal(vac, ex.ctx, sa, sb);
            }
        });
    } else {
        Eigen::MatrixXd corr = sampled_correlation_matrix(
            ex.state, ex.ctx, ds.gamma, static_cast<int>(cfg.scan.draws), rc.seed);
        GaussianState vac = vacuum(ex.basis.n_modes());
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const MeasurementSetting sa{delays[i], 0.0}, sb{delays[j], 0.0};
                ds.corr(i, j) = corr(i, j);
                ds.signal(i, j) =
                    corr(i, j) + correlation_signal(vac, ex.ctx, sa, sb);
            }
    }
    write_correlation_csv(ds, join(rc.out_dir, "scan.csv"), join(rc.out_dir, "scan.json"));
}

void run_reconstruction(const Config& cfg, const RunContext& rc) {
    if (cfg.state.kind == "fock")
        throw ConfigError("reconstruct: state.kind fock is not a Gaussian state");
    Experiment ex = build_experiment(cfg);
    const std::vector<MeasurementSetting> gamma = standard_settings(delay_grid(cfg.scan));

    Eigen::MatrixXd corr;
    if (cfg.scan.draws == 0) corr = correlation_matrix(ex.state, ex.ctx, gamma).corr;
    else
        corr = sampled_correlation_matrix(ex.state, ex.ctx, gamma,
                                          static_cast<int>(cfg.scan.draws), rc.seed);
    Eigen::MatrixXd Z = assemble_lo_matrix(gamma, ex.ctx);
    ReconstructionResult r = reconstruct(corr, Z, cfg.reconstruction.relative_cutoff);

    nlohmann::json out;
    out["rank"] = r.rank;
    out["cutoff"] = r.cutoff;
    out["n_settings"] = gamma.size();
    for (int i = 0; i < r.singular_values.size(); ++i)
        out["singular_values"].push_back(r.singular_values(i));
    for (int i = 0; i < r.projected_cov.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (int j = 0; j < r.projected_cov.cols(); ++j)
            row.push_back(r.projected_cov(i, j));
        out["projected_cov"].push_back(row);
    }
    write_text(join(rc.out_dir, "reconstruction.json"), out.dump(2) + "\n");

    // retained mode spectra: rows = omega grid, columns = Re/Im per mode
    Eigen::MatrixXcd modes = reconstructed_mode_functions(r, ex.basis);
    std::string csv = "omega_thz";
    for (int m = 0; m < modes.rows(); ++m)
        csv += ", re_mode_" + std::to_string(m) + ", im_mode_" + std::to_string(m);
    csv += "\n";
    for (int q = 0; q < ex.basis.n_nodes(); ++q) {
        csv += fmt_double(units::angular_to_thz(ex.basis.rule().nodes[q]));
        for (int m = 0; m < modes.rows(); ++m)
            csv += ", " + fmt_double(modes(m, q).real()) + ", " +
                   fmt_double(modes(m, q).imag());
        csv += "\n";
    }
    write_text(join(rc.out_dir, "modes.csv"), csv);
}

void run_fock_panels(const Config& cfg, const RunContext& rc) {
    if (cfg.state.kind != "fock")
        throw ConfigError("fock: state.kind must be fock");
    if (cfg.crystal && cfg.crystal->alpha != 0.0)
        throw ConfigError("fock: the joint statistics are homodyne-only (no crystal)");
    Experiment ex = build_experiment(cfg);
    const SpectrumConfig mode = cfg.state.mode.value_or(cfg.lo.value_or(cfg.basis));
    FockStateSpec spec{cfg.state.n, units::thz_to_angular(mode.sigma_thz), mode.k};

    const int n_panels = static_cast<int>(cfg.fock.delay_b_fs.size());
    std::vector<SchurStats> stats(n_panels);
    parallel_for(n_panels, rc.threads, [&](int i) {
        DetectionGeometry g =
            detection_geometry(units::fs_to_s(cfg.fock.delay_a_fs),
                               units::fs_to_s(cfg.fock.delay_b_fs[i]), ex.ctx);
        stats[i] = schur_stats(g, spec, ex.basis);
        write_pdf_csv(stats[i], cfg.fock.n, cfg.fock.extent, cfg.fock.grid,
                      join(rc.out_dir, "fock_panel_" + std::to_string(i) + ".csv"),
                      join(rc.out_dir, "fock_panel_" + std::to_string(i) + ".json"));
    });

    std::string csv = "dt_b_fs, sigma_x, sigma_p\n";
    for (int i = 0; i < n_panels; ++i)
        csv += fmt_double(cfg.fock.delay_b_fs[i]) + ", " + fmt_double(stats[i].sigma_x) +
               ", " + fmt_double(stats[i].sigma_p) + "\n";
    write_text(join(rc.out_dir, "fock_sigma.csv"), csv);
}

void run_analysis(const Config& cfg, const RunContext& rc) {
    if (cfg.state.kind == "fock")
        throw ConfigError("analyze: state.kind fock is not a Gaussian state");
    Experiment ex = build_experiment(cfg);
    const std::vector<double> delays = delay_grid(cfg.scan);
    const int n = static_cast<int>(delays.size());

    std::vector<AnalysisSample> samples(static_cast<size_t>(n) * n);
    parallel_for(n, rc.threads, [&](int i) {
        for (int j = 0; j < n; ++j) {
            Eigen::Matrix4d S = detected_state(ex.state, ex.ctx, delays[i], delays[j]);
            AnalysisSample& s = samples[static_cast<size_t>(i) * n + j];
            s.dt_a = delays[i];
            s.dt_b = delays[j];
            s.vne_bits = von_neumann_entropy(S);
            s.logneg = logarithmic_negativity(S);
            s.discord = gaussian_discord(S);
        }
    });
    write_analysis_csv(samples, join(rc.out_dir, "analysis.csv"));
}

} // namespace corrtomo
