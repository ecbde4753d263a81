#include "corrtomo/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "corrtomo/units.hpp"

namespace corrtomo {

namespace {

using nlohmann::json;

json spectrum_to_json(const SpectrumConfig& s) {
    return json{{"sigma_thz", s.sigma_thz}, {"k", s.k}};
}

SpectrumConfig spectrum_from_json(const json& j) {
    SpectrumConfig s;
    s.sigma_thz = j.at("sigma_thz").get<double>();
    s.k = j.at("k").get<double>();
    return s;
}

json crystal_to_json(const CrystalBlock& c) {
    return json{{"length_um", c.length_um},
                {"profile", c.profile},
                {"poling_period_um", c.poling_period_um},
                {"beam_area_um2", c.beam_area_um2},
                {"r41_pm_v", c.r41_pm_v},
                {"probe", spectrum_to_json(c.probe)},
                {"alpha", c.alpha}};
}

CrystalBlock crystal_from_json(const json& j) {
    CrystalBlock c;
    c.length_um = j.at("length_um").get<double>();
    c.profile = j.value("profile", std::string("rect"));
    c.poling_period_um = j.value("poling_period_um", 0.0);
    c.beam_area_um2 = j.value("beam_area_um2", 0.0);
    c.r41_pm_v = j.value("r41_pm_v", 4.0);
    c.probe = spectrum_from_json(j.at("probe"));
    c.alpha = j.value("alpha", 0.0);
    return c;
}

} // namespace

Config parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
    Config cfg;
    try {
        cfg.basis = spectrum_from_json(j.at("basis"));
        cfg.i_max = j.at("basis").at("i_max").get<int>();
        if (j.contains("lo")) cfg.lo = spectrum_from_json(j.at("lo"));
        if (j.contains("crystal")) cfg.crystal = crystal_from_json(j.at("crystal"));
        if (j.contains("state")) {
            const json& s = j.at("state");
            cfg.state.kind = s.value("kind", std::string("vacuum"));
            cfg.state.temperature_k = s.value("temperature_k", 1000.0);
            cfg.state.alpha_gx = s.value("alpha_gx", 0.0);
            if (s.contains("gx")) cfg.state.gx = crystal_from_json(s.at("gx"));
            cfg.state.sigma_x = s.value("sigma_x", 0.5);
            cfg.state.sigma_p = s.value("sigma_p", 0.5);
            if (s.contains("mode")) cfg.state.mode = spectrum_from_json(s.at("mode"));
            cfg.state.n = s.value("n", 0);
        }
        if (j.contains("scan")) {
            const json& s = j.at("scan");
            cfg.scan.delay_window_fs = s.value("delay_window_fs", 12.0);
            cfg.scan.n_delays = s.value("n_delays", 11);
            cfg.scan.dphi_sign = s.value("dphi_sign", +1);
            cfg.scan.draws = s.value("draws", 0L);
        }
        if (j.contains("fock")) {
            const json& f = j.at("fock");
            cfg.fock.n = f.value("n", 3);
            cfg.fock.extent = f.value("extent", 5.0);
            cfg.fock.grid = f.value("grid", 101);
            cfg.fock.delay_a_fs = f.value("delay_a_fs", 0.0);
            if (f.contains("delay_b_fs"))
                cfg.fock.delay_b_fs = f.at("delay_b_fs").get<std::vector<double>>();
        }
        if (j.contains("reconstruction"))
            cfg.reconstruction.relative_cutoff =
                j.at("reconstruction").value("relative_cutoff", 1e-3);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: missing or mistyped field: ") + e.what());
    }
    validate(cfg);
    return cfg;
}

Config load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string serialize_config(const Config& cfg) {
    json j;
    j["basis"] = spectrum_to_json(cfg.basis);
    j["basis"]["i_max"] = cfg.i_max;
    if (cfg.lo) j["lo"] = spectrum_to_json(*cfg.lo);
    if (cfg.crystal) j["crystal"] = crystal_to_json(*cfg.crystal);
    j["state"] = json{{"kind", cfg.state.kind},
                      {"temperature_k", cfg.state.temperature_k},
                      {"alpha_gx", cfg.state.alpha_gx},
                      {"gx", crystal_to_json(cfg.state.gx)},
                      {"sigma_x", cfg.state.sigma_x},
                      {"sigma_p", cfg.state.sigma_p},
                      {"n", cfg.state.n}};
    if (cfg.state.mode) j["state"]["mode"] = spectrum_to_json(*cfg.state.mode);
    j["scan"] = json{{"delay_window_fs", cfg.scan.delay_window_fs},
                     {"n_delays", cfg.scan.n_delays},
                     {"dphi_sign", cfg.scan.dphi_sign},
                     {"draws", cfg.scan.draws}};
    j["fock"] = json{{"n", cfg.fock.n},
                     {"extent", cfg.fock.extent},
                     {"grid", cfg.fock.grid},
                     {"delay_a_fs", cfg.fock.delay_a_fs},
                     {"delay_b_fs", cfg.fock.delay_b_fs}};
    j["reconstruction"] = json{{"relative_cutoff", cfg.reconstruction.relative_cutoff}};
    return j.dump(2);
}

void validate(const Config& cfg) {
    std::vector<std::string> errs;
    auto check_spectrum = [&](const SpectrumConfig& s, const std::string& who) {
        if (!(s.sigma_thz > 0.0)) errs.push_back(who + ".sigma_thz must be > 0");
        if (!(s.k > 0.0)) errs.push_back(who + ".k must be > 0");
    };
    check_spectrum(cfg.basis, "basis");
    if (cfg.i_max < 1) errs.push_back("basis.i_max must be >= 1");
    if (cfg.lo) check_spectrum(*cfg.lo, "lo");
    auto check_crystal = [&](const CrystalBlock& c, const std::string& who) {
        if (!(c.length_um > 0.0)) errs.push_back(who + ".length_um must be > 0");
        if (c.profile != "rect" && c.profile != "gaussian_exp" && c.profile != "cos_poled")
            errs.push_back(who + ".profile must be rect | gaussian_exp | cos_poled");
        if (c.profile == "cos_poled" && !(c.poling_period_um > 0.0))
            errs.push_back(who + ".poling_period_um must be > 0 for cos_poled");
        check_spectrum(c.probe, who + ".probe");
    };
    if (cfg.crystal) check_crystal(*cfg.crystal, "crystal");
    const std::string& kind = cfg.state.kind;
    if (kind != "vacuum" && kind != "thermal" && kind != "mmsv" && kind != "smsv" &&
        kind != "fock")
        errs.push_back("state.kind must be vacuum | thermal | mmsv | smsv | fock");
    if (kind == "thermal" && !(cfg.state.temperature_k > 0.0))
        errs.push_back("state.temperature_k must be > 0");
    if (kind == "mmsv") {
        if (!(cfg.state.alpha_gx >= 0.0)) errs.push_back("state.alpha_gx must be >= 0");
        check_crystal(cfg.state.gx, "state.gx");
    }
    if (kind == "smsv") {
        if (!(cfg.state.sigma_x > 0.0 && cfg.state.sigma_p > 0.0))
            errs.push_back("state.sigma_x and state.sigma_p must be > 0");
        if (cfg.state.sigma_x * cfg.state.sigma_p < 0.25 * (1.0 - 1e-12))
            errs.push_back("state.sigma_x * state.sigma_p must satisfy the uncertainty bound 1/4");
    }
    if (kind == "fock") {
        if (cfg.state.n < 0) errs.push_back("state.n must be >= 0");
        if (cfg.state.mode) check_spectrum(*cfg.state.mode, "state.mode");
    }
    if (!(cfg.scan.delay_window_fs > 0.0)) errs.push_back("scan.delay_window_fs must be > 0");
    if (cfg.scan.n_delays < 2) errs.push_back("scan.n_delays must be >= 2");
    if (cfg.scan.dphi_sign != 1 && cfg.scan.dphi_sign != -1)
        errs.push_back("scan.dphi_sign must be +1 or -1");
    if (cfg.scan.draws < 0) errs.push_back("scan.draws must be >= 0");
    if (cfg.fock.n < 0) errs.push_back("fock.n must be >= 0");
    if (cfg.fock.grid < 2) errs.push_back("fock.grid must be >= 2");
    if (!(cfg.fock.extent > 0.0)) errs.push_back("fock.extent must be > 0");
    if (cfg.fock.delay_b_fs.empty()) errs.push_back("fock.delay_b_fs must be non-empty");
    if (!(cfg.reconstruction.relative_cutoff > 0.0 && cfg.reconstruction.relative_cutoff < 1.0))
        errs.push_back("reconstruction.relative_cutoff must be in (0, 1)");
    if (!errs.empty()) {
        std::string msg = "config validation failed:";
        for (const std::string& e : errs) msg += "\n  - " + e;
        throw ConfigError(msg);
    }
}

ModeBasisParams basis_params(const Config& cfg) {
    return {units::thz_to_angular(cfg.basis.sigma_thz), cfg.basis.k, cfg.i_max};
}

CrystalConfig crystal_config(const CrystalBlock& blk) {
    CrystalConfig c;
    c.length = blk.length_um * 1e-6;
    if (blk.profile == "rect") c.profile = CrystalProfile::rect;
    else if (blk.profile == "gaussian_exp") c.profile = CrystalProfile::gaussian_exp;
    else c.profile = CrystalProfile::cos_poled;
    c.poling_period = blk.poling_period_um * 1e-6;
    c.beam_area = blk.beam_area_um2 * 1e-12;
    c.r41 = blk.r41_pm_v * 1e-12;
    return c;
}

ProbeSpectrum probe_spectrum(const SpectrumConfig& s) {
    return {units::thz_to_angular(s.sigma_thz), s.k};
}

} // namespace corrtomo
