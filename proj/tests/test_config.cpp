#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "vibrodyn/presets.hpp"
#include "vibrodyn/runner.hpp"

using namespace vibrodyn;

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    REQUIRE(f.good());
    return std::string(std::istreambuf_iterator<char>(f), {});
}

} // namespace

TEST_CASE("config parsing: values, comments, defaults") {
    const std::string text =
        "# comment line\n"
        "omega_sigma_eV = 2.4\n"
        "omega_v_eV = 0.025   # trailing comment\n"
        "g_eV = 0.025\n"
        "Omega_eV = 1e-3\n"
        "omega_drive_eV = 1.5\n"
        "gamma_D_eV = 1e-3\n"
        "\n"
        "mode = both\n"
        "decay_grouping = single-collective\n"
        "t_end = 500\n"
        "grid_points = 128\n"
        "spectrum_window = rect\n"
        "output_dir = /tmp/somewhere\n";
    const RunSpec spec = parse_config_text(text, "test.conf");
    CHECK(spec.params.g == 0.025);
    CHECK(spec.params.gamma_D == 1e-3);
    CHECK(spec.params.gamma_deph == 0.0);
    CHECK(spec.mode == RunMode::both);
    CHECK(spec.cfg.decay_grouping == DecayGrouping::single_collective);
    CHECK(spec.window == SpectrumWindow::rect);
    CHECK(spec.output_dir == "/tmp/somewhere");
    // N defaulted by the truncation margin rule at alpha = 1
    CHECK(spec.params.N == 22);
}

TEST_CASE("config parsing: line-numbered diagnostics") {
    auto expect_error = [](const std::string& text, const std::string& fragment) {
        try {
            parse_config_text(text, "bad.conf");
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(std::string(e.what()).find(fragment) != std::string::npos);
        }
    };
    expect_error("omega_v_eV = 0.025\nnot a key value line\n", "bad.conf:2");
    expect_error("omega_v_eV = abc\n", "bad.conf:1");
    expect_error("made_up_key = 1\n", "unknown key");
    expect_error("grid_points = 2.5\n", "integer");
    expect_error("mode = banana\n", "mode");
    expect_error("omega_v_eV = -1\n", "omega_v");
}

TEST_CASE("pump shape inference") {
    RunSpec s1 = parse_config_text("pump_gamma_p0_eV = 0.01\npump_t0 = 100\n", "c");
    CHECK(s1.params.pump.shape == PumpShape::rectangular_pulse);
    RunSpec s2 = parse_config_text("pump_gamma_p0_eV = 0.01\n", "c");
    CHECK(s2.params.pump.shape == PumpShape::constant);
    RunSpec s3 = parse_config_text("g_eV = 0\n", "c");
    CHECK(s3.params.pump.shape == PumpShape::off);
    RunSpec s4 = parse_config_text(
        "pump_gamma_p0_eV = 0.01\npump_t0 = 100\npump_shape = off\n", "c");
    CHECK(s4.params.pump.shape == PumpShape::off);
}

TEST_CASE("serialized config reparses to the same spec") {
    RunSpec spec = preset("fig5");
    spec.output_dir = "/tmp/x";
    const RunSpec back = parse_config_text(serialize_config(spec), "roundtrip");
    CHECK(back.params.omega_sigma == spec.params.omega_sigma);
    CHECK(back.params.g == spec.params.g);
    CHECK(back.params.pump.gamma_p0 == spec.params.pump.gamma_p0);
    CHECK(back.params.pump.t0 == spec.params.pump.t0);
    CHECK(back.params.pump.shape == spec.params.pump.shape);
    CHECK(back.params.N == spec.params.N);
    CHECK(back.mode == spec.mode);
    CHECK(back.t_end == spec.t_end);
    CHECK(back.grid_points == spec.grid_points);
    CHECK(back.output_dir == spec.output_dir);
}

TEST_CASE("presets cover the figure regimes") {
    CHECK(preset_names().size() == 8);
    for (const auto& name : preset_names()) {
        CHECK(is_preset(name));
        const RunSpec s = preset(name);
        CHECK_NOTHROW(s.params.validate());
        CHECK(!preset_description(name).empty());
    }
    CHECK(!is_preset("fig99"));
    CHECK_THROWS_AS(preset("fig99"), ConfigError);

    const RunSpec f3 = preset("fig3");
    CHECK(f3.params.gamma_D == 1e-3);
    CHECK(f3.params.gamma_deph == 5e-3);
    CHECK(f3.params.gamma_v == 2e-4);
    CHECK(f3.params.Omega == 1e-3);
    CHECK(f3.params.omega_drive == 1.5);
    CHECK(f3.params.omega_sigma == 2.4);
    CHECK(f3.params.omega_v == 0.025);
    CHECK(f3.params.g == 0.025);
    CHECK(preset("fig4").params.omega_drive == 2.2);
    CHECK(preset("fig6").params.g == 0.05);
    CHECK(preset("fig7a").sweep_values.size() == 5);
    CHECK(preset("fig7b").sweep_vary == SweepVariable::omega_v);
}

TEST_CASE("missing config file maps to a config error") {
    CHECK_THROWS_AS(parse_config_file("/nonexistent/path.conf"), ConfigError);
}

TEST_CASE("runner emits deterministic byte-identical outputs") {
    RunSpec spec = parse_config_text("g_eV = 0.0125\n"
                                     "gamma_D_eV = 1e-3\n"
                                     "gamma_deph_eV = 5e-3\n"
                                     "gamma_v_eV = 2e-4\n"
                                     "N = 10\n"
                                     "t_end = 300\n"
                                     "grid_points = 128\n",
                                     "det.conf");
    namespace fs = std::filesystem;
    const fs::path dir1 = fs::temp_directory_path() / "vibrodyn_det1";
    const fs::path dir2 = fs::temp_directory_path() / "vibrodyn_det2";
    fs::remove_all(dir1);
    fs::remove_all(dir2);
    spec.output_dir = dir1.string();
    run_single(spec);
    spec.output_dir = dir2.string();
    run_single(spec);
    for (const char* f : {"trajectory.csv", "spectrum.csv"})
        CHECK(slurp(dir1 / f) == slurp(dir2 / f));
    // header sanity
    const std::string csv = slurp(dir1 / "trajectory.csv");
    CHECK(csv.rfind("time_hbar_per_eV,time_fs,re_sigma,im_sigma,abs_sigma,D,re_b,im_b\n", 0) ==
          0);
    fs::remove_all(dir1);
    fs::remove_all(dir2);
}

TEST_CASE("runner rejects a grid that cannot resolve the retained band") {
    RunSpec spec = parse_config_text("g_eV = 0.025\nN = 22\nt_end = 8000\ngrid_points = 64\n",
                                     "nyq.conf");
    CHECK_THROWS_AS(run_single(spec, /*write_files=*/false), ConfigError);
}

TEST_CASE("uncoupled run: no nuclear displacement and a single line") {
    RunSpec spec = preset("fig1");
    spec.t_end = 2000.0;
    spec.grid_points = 1024;
    const RunResult res = run_single(spec, /*write_files=*/false);
    const Eigen::VectorXcd b = res.primary().record("b");
    CHECK(b.cwiseAbs().maxCoeff() < 1e-8);
    REQUIRE(!res.peaks.peaks.empty());
    CHECK(res.spec.rayleigh_weight > 0.0);
}

TEST_CASE("spectrum of |sigma| as an alternative observable") {
    RunSpec spec = parse_config_text("g_eV = 0.0125\n"
                                     "gamma_D_eV = 1e-3\n"
                                     "gamma_deph_eV = 5e-3\n"
                                     "gamma_v_eV = 2e-4\n"
                                     "N = 12\n"
                                     "t_end = 2000\n"
                                     "grid_points = 1024\n"
                                     "spectrum_of = abs_sigma\n",
                                     "abs.conf");
    const RunResult res = run_single(spec, /*write_files=*/false);
    // |sigma(t)| is real: its transform is centred on zero frequency and the
    // pipeline's internal power accounting still holds
    CHECK(res.spec.spectral_power_sum ==
          doctest::Approx(res.spec.windowed_power).epsilon(1e-12));
    double span_lo = res.spec.frequencies.front(), span_hi = res.spec.frequencies.back();
    CHECK(span_lo < 0.0);
    CHECK(span_hi > 0.0);
}

TEST_CASE("sweep runner writes table rows for every input value") {
    RunSpec spec = preset("fig7a");
    spec.sweep_values = {0.0, 0.03};
    spec.grid_points = 1024;
    spec.threads = 2;
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "vibrodyn_sweep_test";
    fs::remove_all(dir);
    spec.output_dir = dir.string();
    const auto rows = run_sweep(spec);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].status == "divergent");
    CHECK(rows[1].status == "ok");
    CHECK(fs::exists(dir / "sweep.csv"));
    CHECK(fs::exists(dir / "sweep.json"));
    const std::string csv = slurp(dir / "sweep.csv");
    CHECK(csv.rfind("value,t_col_num,t_col_analytic,t_rev_num,t_rev_analytic,N,status\n", 0) ==
          0);
    fs::remove_all(dir);
}
