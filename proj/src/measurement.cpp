#include "corrtomo/measurement.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "corrtomo/units.hpp"

namespace corrtomo {

namespace {

// R^T(+-pi/2) applied in place of a full matrix product.
Eigen::VectorXd quarter_rotate_transpose(const Eigen::VectorXd& v, int sign) {
    const int N = static_cast<int>(v.size()) / 2;
    Eigen::VectorXd w(2 * N);
    if (sign > 0) { // R^T(pi/2): head <- tail, tail <- -head
        w.head(N) = v.tail(N);
        w.tail(N) = -v.head(N);
    } else {
        w.head(N) = -v.tail(N);
        w.tail(N) = v.head(N);
    }
    return w;
}

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

MeasurementContext::MeasurementContext(const ModeBasis& basis, Eigen::VectorXd zeta_lo,
                                       std::optional<Eigen::MatrixXd> M_NL, int dphi_sign)
    : zeta_(std::move(zeta_lo)),
      prop_(basis.frequency_matrix()),
      mnl_(std::move(M_NL)),
      dphi_sign_(dphi_sign >= 0 ? +1 : -1) {
    const int N = basis.n_modes();
    if (zeta_.size() != 2 * N)
        throw std::invalid_argument("MeasurementContext: LO vector does not match the basis");
    const double n = zeta_.norm();
    if (!(n > 0.0)) throw std::invalid_argument("MeasurementContext: zero LO vector");
    zeta_ /= n; // unit-norm measurement vectors
    if (mnl_ && (mnl_->rows() != 2 * N || mnl_->cols() != 2 * N))
        throw std::invalid_argument("MeasurementContext: crystal transform size mismatch");
}

double MeasurementContext::arm_phase(Arm arm) const {
    const double base = 0.5 * units::pi * dphi_sign_;
    return arm == Arm::a ? base : -base;
}

Eigen::VectorXd MeasurementContext::state_part(Arm, const MeasurementSetting& s) const {
    return transformed_lo(zeta_, prop_, s.delay, mnl_ ? &*mnl_ : nullptr, s.phi);
}

MeasurementVectors MeasurementContext::vectors(Arm arm, const MeasurementSetting& s) const {
    MeasurementVectors mv;
    mv.state_part = state_part(arm, s);
    // The reflection phase is acquired at the detector, after all propagation:
    // the vacuum-port vector is the quarter-rotated image of the state part.
    mv.vacuum_part = quarter_rotate_transpose(mv.state_part, arm == Arm::a ? dphi_sign_ : -dphi_sign_);
    return mv;
}

double correlation_signal(const GaussianState& state, const MeasurementContext& ctx,
                          const MeasurementSetting& set_a, const MeasurementSetting& set_b) {
    const Eigen::VectorXd va = ctx.state_part(Arm::a, set_a);
    const Eigen::VectorXd vb = ctx.state_part(Arm::b, set_b);
    if (va.size() != state.cov.rows())
        throw std::invalid_argument("correlation_signal: state/basis dimension mismatch");
    return va.dot(state.cov * vb);
}

std::vector<MeasurementSetting> standard_settings(const std::vector<double>& delays) {
    std::vector<MeasurementSetting> g;
    g.reserve(2 * delays.size());
    for (double dt : delays) {
        g.push_back({dt, 0.0});
        g.push_back({dt, 0.5 * units::pi});
    }
    return g;
}

CorrelationDataset correlation_matrix(const GaussianState& state, const MeasurementContext& ctx,
                                      const std::vector<MeasurementSetting>& gamma) {
    const int m = static_cast<int>(gamma.size());
    if (m == 0) throw std::invalid_argument("correlation_matrix: empty setting list");
    std::vector<MeasurementVectors> va(m), vb(m);
    for (int i = 0; i < m; ++i) {
        va[i] = ctx.vectors(Arm::a, gamma[i]);
        vb[i] = ctx.vectors(Arm::b, gamma[i]);
    }
    CorrelationDataset ds;
    ds.gamma = gamma;
    ds.corr.resize(m, m);
    ds.signal.resize(m, m);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            const double g = va[i].state_part.dot(state.cov * vb[j].state_part);
            // vacuum port: Sigma_vac = I/2
            const double vac = 0.5 * va[i].vacuum_part.dot(vb[j].vacuum_part);
            ds.signal(i, j) = g;
            ds.corr(i, j) = g + vac;
        }
    }
    return ds;
}

Eigen::Matrix4d detected_state(const GaussianState& state, const MeasurementContext& ctx,
                               double dt_a, double dt_b) {
    const double hp = 0.5 * units::pi;
    struct Slot {
        Arm arm;
        MeasurementSetting set;
    };
    const Slot slots[4] = {{Arm::a, {dt_a, 0.0}},
                           {Arm::a, {dt_a, hp}},
                           {Arm::b, {dt_b, 0.0}},
                           {Arm::b, {dt_b, hp}}};
    MeasurementVectors mv[4];
    for (int i = 0; i < 4; ++i) mv[i] = ctx.vectors(slots[i].arm, slots[i].set);
    Eigen::Matrix4d S;
    for (int i = 0; i < 4; ++i) {
        for (int j = i; j < 4; ++j) {
            const double g = mv[i].state_part.dot(state.cov * mv[j].state_part);
            const double vac = 0.5 * mv[i].vacuum_part.dot(mv[j].vacuum_part);
            // The 1/2 restores the unit commutator of the combined operator
            // (state + vacuum port): vacuum in, vacuum out.
            S(i, j) = S(j, i) = 0.5 * (g + vac);
        }
    }
    // the physicality check expects block ordering (x_a, x_b, p_a, p_b)
    Eigen::Matrix4d T = Eigen::Matrix4d::Zero();
    T(0, 0) = T(1, 2) = T(2, 1) = T(3, 3) = 1.0;
    if (!is_physical_covariance(T * S * T.transpose(), 1e-7))
        throw NumericalError("detected_state: assembled covariance is unphysical");
    return S;
}

void write_correlation_csv(const CorrelationDataset& ds, const std::string& csv_path,
                           const std::string& sidecar_json_path) {
    std::ofstream csv(csv_path);
    if (!csv) throw std::runtime_error("write_correlation_csv: cannot open " + csv_path);
    csv << "dt_a_fs, dt_b_fs, phi_a, phi_b, g\n";
    const int m = static_cast<int>(ds.gamma.size());
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            csv << fmt_double(units::s_to_fs(ds.gamma[i].delay)) << ", "
                << fmt_double(units::s_to_fs(ds.gamma[j].delay)) << ", "
                << fmt_double(ds.gamma[i].phi) << ", " << fmt_double(ds.gamma[j].phi) << ", "
                << fmt_double(ds.corr(i, j)) << "\n";
        }
    }
    nlohmann::json sj;
    sj["n_settings"] = m;
    // delays are stored in seconds: the fs conversion in the CSV body is for
    // reading convenience and does not round-trip bit-exactly
    sj["delays_s"] = nlohmann::json::array();
    sj["phis"] = nlohmann::json::array();
    for (const auto& s : ds.gamma) {
        sj["delays_s"].push_back(fmt_double(s.delay));
        sj["phis"].push_back(fmt_double(s.phi));
    }
    sj["signal"] = nlohmann::json::array();
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) sj["signal"].push_back(fmt_double(ds.signal(i, j)));
    std::ofstream js(sidecar_json_path);
    if (!js) throw std::runtime_error("write_correlation_csv: cannot open " + sidecar_json_path);
    js << sj.dump(2) << "\n";
}

CorrelationDataset read_correlation_csv(const std::string& csv_path,
                                        const std::string& sidecar_json_path) {
    std::ifstream js(sidecar_json_path);
    if (!js) throw std::runtime_error("read_correlation_csv: cannot open " + sidecar_json_path);
    nlohmann::json sj = nlohmann::json::parse(js);
    const int m = sj.at("n_settings").get<int>();
    CorrelationDataset ds;
    ds.gamma.resize(m);
    for (int i = 0; i < m; ++i) {
        ds.gamma[i].delay = std::stod(sj.at("delays_s").at(i).get<std::string>());
        ds.gamma[i].phi = std::stod(sj.at("phis").at(i).get<std::string>());
    }
    ds.signal.resize(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            ds.signal(i, j) = std::stod(sj.at("signal").at(i * m + j).get<std::string>());
    ds.corr.resize(m, m);
    std::ifstream csv(csv_path);
    if (!csv) throw std::runtime_error("read_correlation_csv: cannot open " + csv_path);
    std::string line;
    std::getline(csv, line); // header
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            if (!std::getline(csv, line))
                throw std::runtime_error("read_correlation_csv: truncated file");
            std::stringstream ss(line);
            std::string tok;
            double vals[5];
            for (double& v : vals) {
                if (!std::getline(ss, tok, ','))
                    throw std::runtime_error("read_correlation_csv: malformed row");
                v = std::stod(tok);
            }
            ds.corr(i, j) = vals[4];
        }
    }
    return ds;
}

} // namespace corrtomo
