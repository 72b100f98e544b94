// Command-line front end for the reconstruction pipeline. Verbs cover the
// full chain: simulate -> pod -> sensors -> bound -> reconstruct -> evaluate.
// Artifacts embed the grid and configuration digests; a verb refuses inputs
// whose digests do not match the configuration it was started with.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "frost/config.hpp"
#include "frost/estimation.hpp"
#include "frost/geometry.hpp"
#include "frost/io.hpp"
#include "frost/materials.hpp"
#include "frost/observation.hpp"
#include "frost/placement.hpp"
#include "frost/pod.hpp"
#include "frost/solver.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

struct Context {
  frost::PipelineConfig cfg;
  frost::StructuredGrid grid;
  frost::MaterialModel mat;
  frost::Hash256 grid_digest{};
  frost::Hash256 config_digest{};
};

Context make_context(const std::string& config_path) {
  Context c;
  if (!config_path.empty())
    c.cfg = frost::load_config(config_path);
  else
    c.cfg.validate();
  c.grid = frost::build_grid(c.cfg.geometry, c.cfg.nx, c.cfg.ny);
  c.mat = frost::MaterialModel::salmon_defaults();
  c.grid_digest = frost::grid_hash(c.grid);
  c.config_digest = frost::config_hash(c.cfg);
  return c;
}

std::string run_file_name(int k) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "run_%03d.frost1", k);
  return buf;
}

std::string hex(const frost::Hash256& h) { return frost::to_hex(h); }

void check_grid_digest(const Context& ctx, const frost::Hash256& got, const std::string& what) {
  if (got != ctx.grid_digest)
    throw std::runtime_error(what + " was produced on a different grid (hash " + hex(got) +
                             ", configured grid is " + hex(ctx.grid_digest) + ")");
}

void check_config_digest(const Context& ctx, const frost::Hash256& got, const std::string& what) {
  if (got != ctx.config_digest)
    throw std::runtime_error(what + " was produced under a different configuration (hash " +
                             hex(got) + ", current is " + hex(ctx.config_digest) + ")");
}

/// Sidecar next to a binary artifact: same path with .json appended to the
/// stem. Carries the configuration digest the binary format has no field for.
std::string sidecar_path(const std::string& artifact) {
  return (fs::path(artifact).replace_extension(".json")).string();
}

void check_sidecar(const Context& ctx, const std::string& artifact) {
  const std::string side = sidecar_path(artifact);
  if (!fs::exists(side)) return;
  const auto j = nlohmann::json::parse(frost::read_text_file(side));
  if (j.contains("config_hash"))
    check_config_digest(ctx, frost::from_hex(j["config_hash"].get<std::string>()), side);
}

std::function<bool(int)> include_predicate(const Context& ctx) {
  if (!ctx.cfg.exclude_food) return {};
  const frost::StructuredGrid* grid = &ctx.grid;
  return [grid](int cell) { return grid->labels[cell] != frost::CellLabel::Food; };
}

frost::SensorPool make_pool(const Context& ctx) {
  return frost::build_sensor_pool(ctx.grid, ctx.cfg.pixel_size, ctx.cfg.sensor_mode,
                                  include_predicate(ctx));
}

frost::ObservationMatrix observer_from_layout(const Context& ctx,
                                              const frost::SensorLayout& layout) {
  check_grid_digest(ctx, layout.grid_digest, "sensor layout");
  check_config_digest(ctx, layout.config_digest, "sensor layout");
  return frost::assemble_observer(ctx.grid, layout.sensors, layout.mode);
}

frost::PodBasis load_basis_checked(const Context& ctx, const std::string& path) {
  frost::PodBasis basis = frost::read_basis(path);
  check_grid_digest(ctx, basis.grid_digest, path);
  check_sidecar(ctx, path);
  return basis;
}

/// Dimension that the reconstruction uses: an explicit flag wins, then the
/// configured dimension, then the minimizer of the a-priori bound curve for
/// this observer.
int resolve_dimension(const Context& ctx, const frost::PodBasis& basis,
                      const frost::ObservationMatrix& w, int flag_n, bool* selected) {
  *selected = false;
  if (flag_n > 0) return flag_n;
  if (ctx.cfg.rom_dimension > 0) return ctx.cfg.rom_dimension;
  const int hi = std::min(w.count(), basis.n_max) - 1;
  if (hi < 1)
    throw std::runtime_error("dimension selection needs at least 2 sensors and 2 modes");
  const auto curve = frost::apriori_bound_curve(basis, w, 1, hi);
  *selected = true;
  return frost::select_rom_dimension(curve, 1);
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
  std::string config;
  std::string out_dir;
};

void cmd_simulate(const SimulateArgs& a) {
  Context ctx = make_context(a.config);
  fs::create_directories(a.out_dir);

  frost::write_text_file((fs::path(a.out_dir) / "config.json").string(),
                         frost::canonical_config_json(ctx.cfg));

  const auto samples = frost::sample_parameters(ctx.cfg.sample_count, ctx.cfg.seed);
  for (int k = 0; k < ctx.cfg.sample_count; ++k) {
    const frost::RunResult res = frost::run_case(ctx.grid, ctx.mat, samples[k], ctx.cfg.solver);

    frost::StoredRun run;
    run.grid_digest = ctx.grid_digest;
    run.params = res.params;
    run.snapshots = res.snapshots;
    const std::string path = (fs::path(a.out_dir) / run_file_name(k)).string();
    frost::write_run(path, run);

    ordered_json meta;
    meta["format"] = "frost-run-meta";
    meta["run"] = k;
    meta["grid_hash"] = hex(ctx.grid_digest);
    meta["config_hash"] = hex(ctx.config_digest);
    meta["params"] = {{"u_in", res.params.u_in},
                      {"t_cold", res.params.t_cold},
                      {"t_ext", res.params.t_ext},
                      {"h_ext", res.params.h_ext}};
    meta["steps"] = res.steps;
    meta["picard_iterations"] = res.picard_iterations;
    meta["linear_iterations"] = res.linear_iterations;
    meta["snapshots"] = res.snapshots.size();
    frost::write_text_file(sidecar_path(path), meta.dump(2) + "\n");

    std::cout << "run " << k << ": " << res.steps << " steps, " << res.snapshots.size()
              << " snapshots -> " << path << "\n";
  }
}

// --------------------------------------------------------------------- pod

struct PodArgs {
  std::string config;
  std::string runs_dir;
  std::string use = "train";
  std::vector<std::string> inputs;
  std::string out;
};

std::vector<std::string> select_run_files(const Context& ctx, const PodArgs& a) {
  if (!a.inputs.empty()) return a.inputs;
  if (a.runs_dir.empty())
    throw std::runtime_error("pod needs --runs <dir> or explicit --in files");
  int lo = 0, hi = ctx.cfg.sample_count;
  if (a.use == "train")
    hi = ctx.cfg.train_count;
  else if (a.use == "test")
    lo = ctx.cfg.train_count;
  else if (a.use != "all")
    throw std::runtime_error("--use must be train, test, or all");
  std::vector<std::string> files;
  for (int k = lo; k < hi; ++k) files.push_back((fs::path(a.runs_dir) / run_file_name(k)).string());
  return files;
}

std::vector<frost::StoredRun> load_runs_checked(const Context& ctx,
                                                const std::vector<std::string>& files) {
  std::vector<frost::StoredRun> runs;
  for (const auto& f : files) {
    frost::StoredRun run = frost::read_run(f);
    check_grid_digest(ctx, run.grid_digest, f);
    check_sidecar(ctx, f);
    runs.push_back(std::move(run));
  }
  return runs;
}

void cmd_pod(const PodArgs& a) {
  Context ctx = make_context(a.config);
  const auto files = select_run_files(ctx, a);
  const auto runs = load_runs_checked(ctx, files);

  const double scale = frost::snapshot_scale(ctx.cfg, ctx.grid);
  const frost::SnapshotMatrix snaps =
      frost::assemble_snapshots(runs, ctx.cfg.subtract_mean, scale);
  const int n_max = std::min(ctx.cfg.n_max, std::min(snaps.rows, snaps.cols));
  const frost::PodBasis basis = frost::compute_pod(snaps, n_max);
  frost::write_basis(a.out, basis);

  ordered_json meta;
  meta["format"] = "frost-basis-meta";
  meta["grid_hash"] = hex(ctx.grid_digest);
  meta["config_hash"] = hex(ctx.config_digest);
  meta["columns"] = snaps.cols;
  meta["n_max"] = n_max;
  meta["mean_subtracted"] = basis.mean_subtracted;
  meta["scale"] = scale;
  meta["runs"] = files;
  meta["sigma"] = basis.sigma;
  std::vector<double> tails(n_max + 1);
  for (int n = 0; n <= n_max; ++n) tails[n] = frost::tail_energy(basis, n);
  meta["tail_energy"] = tails;
  frost::write_text_file(sidecar_path(a.out), meta.dump(2) + "\n");

  std::cout << "basis: " << snaps.cols << " snapshots, n_max " << n_max << ", sigma_1 "
            << (basis.sigma.empty() ? 0.0 : basis.sigma[0]) << " -> " << a.out << "\n";
}

// ----------------------------------------------------------------- sensors

struct SensorsArgs {
  std::string config;
  std::string basis;
  std::string out;
  std::string method = "greedy";
  int m = 0;
  int n = 0;
};

void cmd_sensors(const SensorsArgs& a) {
  Context ctx = make_context(a.config);
  const frost::PodBasis basis = load_basis_checked(ctx, a.basis);
  const frost::SensorPool pool = make_pool(ctx);

  frost::Placement placement;
  int n_used = 0;
  if (a.method == "greedy") {
    const frost::ObservationMatrix all =
        frost::assemble_observer(ctx.grid, pool.candidates, ctx.cfg.sensor_mode);
    bool selected = false;
    n_used = resolve_dimension(ctx, basis, all, a.n, &selected);
    const int m = a.m > 0 ? a.m : (3 * n_used + 1) / 2;  // ceil(1.5 n)
    placement = frost::greedy_place(basis, n_used, pool, m);
    if (selected) std::cout << "selected dimension n = " << n_used << " from the bound curve\n";
  } else if (a.method == "regular") {
    if (a.m <= 0) throw std::runtime_error("regular placement needs an explicit --m");
    placement = frost::regular_placement(pool, a.m);
  } else {
    throw std::runtime_error("--method must be greedy or regular");
  }

  const frost::ObservationMatrix w =
      frost::observer_from_placement(ctx.grid, pool, placement, ctx.cfg.sensor_mode);

  frost::SensorLayout layout;
  layout.mode = ctx.cfg.sensor_mode;
  layout.pixel_size = ctx.cfg.pixel_size;
  layout.grid_digest = ctx.grid_digest;
  layout.config_digest = ctx.config_digest;
  layout.sensors = w.sensors;
  layout.objectives = placement.objectives;
  frost::write_sensor_layout(a.out, layout);

  std::cout << a.method << " placement: " << w.count() << " of " << pool.size()
            << " candidate pixels -> " << a.out << "\n";
}

// ------------------------------------------------------------------- bound

struct BoundArgs {
  std::string config;
  std::string basis;
  std::string layout;
  std::string out;
  std::string csv;
};

void cmd_bound(const BoundArgs& a) {
  Context ctx = make_context(a.config);
  const frost::PodBasis basis = load_basis_checked(ctx, a.basis);

  frost::ObservationMatrix w;
  if (!a.layout.empty()) {
    w = observer_from_layout(ctx, frost::read_sensor_layout(a.layout));
  } else {
    const frost::SensorPool pool = make_pool(ctx);
    w = frost::assemble_observer(ctx.grid, pool.candidates, ctx.cfg.sensor_mode);
  }

  const int hi = std::min(w.count(), basis.n_max) - 1;
  if (hi < 1) throw std::runtime_error("bound curve needs at least 2 sensors and 2 modes");
  const auto curve = frost::apriori_bound_curve(basis, w, 1, hi);
  const int n_star = frost::select_rom_dimension(curve, 1);

  ordered_json meta;
  meta["format"] = "frost-bound";
  meta["grid_hash"] = hex(ctx.grid_digest);
  meta["config_hash"] = hex(ctx.config_digest);
  meta["sensors"] = w.count();
  meta["n_lo"] = 1;
  meta["n_hi"] = hi;
  meta["selected"] = n_star;
  meta["curve"] = curve;
  frost::write_text_file(a.out, meta.dump(2) + "\n");

  if (!a.csv.empty()) {
    std::vector<std::vector<double>> rows;
    for (int k = 0; k < static_cast<int>(curve.size()); ++k)
      rows.push_back({static_cast<double>(1 + k), curve[k]});
    frost::write_csv(a.csv, {"n", "bound"}, rows);
  }

  std::cout << "bound curve over n in [1, " << hi << "], selected n = " << n_star << " -> "
            << a.out << "\n";
}

// ------------------------------------------------------------- reconstruct

struct ReconstructArgs {
  std::string config;
  std::string basis;
  std::string layout;
  std::string truth;
  std::string measurements;
  std::string out_dir;
  std::string dump_measurements;
  int n = 0;
  double noise_sd = -1.0;  // negative: take the configured value
};

void cmd_reconstruct(const ReconstructArgs& a) {
  Context ctx = make_context(a.config);
  if (a.truth.empty() == a.measurements.empty())
    throw std::runtime_error("reconstruct needs exactly one of --truth or --measurements");

  const frost::PodBasis basis = load_basis_checked(ctx, a.basis);
  const frost::SensorLayout layout = frost::read_sensor_layout(a.layout);
  const frost::ObservationMatrix w = observer_from_layout(ctx, layout);

  bool selected = false;
  const int n = resolve_dimension(ctx, basis, w, a.n, &selected);
  const double noise_sd = a.noise_sd >= 0 ? a.noise_sd : ctx.cfg.noise_sd;

  frost::StoredRun truth;
  frost::StoredRun meas;
  if (!a.truth.empty()) {
    truth = frost::read_run(a.truth);
    check_grid_digest(ctx, truth.grid_digest, a.truth);
    check_sidecar(ctx, a.truth);
    meas.grid_digest = ctx.grid_digest;
    meas.params = truth.params;
    for (std::size_t k = 0; k < truth.snapshots.size(); ++k) {
      const auto& snap = truth.snapshots[k];
      frost::Snapshot rec;
      rec.time = snap.time;
      rec.temperature = frost::measure(w, snap.temperature, noise_sd,
                                       ctx.cfg.noise_seed + static_cast<std::uint64_t>(k));
      meas.snapshots.push_back(std::move(rec));
    }
  } else {
    meas = frost::read_run(a.measurements);
    check_grid_digest(ctx, meas.grid_digest, a.measurements);
    check_sidecar(ctx, a.measurements);
    if (!meas.snapshots.empty() &&
        static_cast<int>(meas.snapshots[0].temperature.size()) != w.count())
      throw std::runtime_error("measurement length does not match the sensor layout");
  }

  fs::create_directories(a.out_dir);
  if (!a.dump_measurements.empty()) frost::write_run(a.dump_measurements, meas);

  frost::StoredRun recon;
  recon.grid_digest = ctx.grid_digest;
  recon.params = meas.params;
  std::vector<std::vector<double>> error_rows;
  std::vector<double> rel_errors;
  for (std::size_t k = 0; k < meas.snapshots.size(); ++k) {
    const auto& record = meas.snapshots[k];
    const frost::ReconstructionResult rec =
        frost::reconstruct(basis, w, n, record.temperature);
    frost::Snapshot out_snap;
    out_snap.time = record.time;
    out_snap.temperature = rec.field;
    recon.snapshots.push_back(std::move(out_snap));
    if (!a.truth.empty()) {
      const double rel = frost::relative_l2_error(truth.snapshots[k].temperature, rec.field);
      rel_errors.push_back(rel);
      error_rows.push_back({record.time, rel, rec.residual});
    } else {
      error_rows.push_back({record.time, rec.residual});
    }
  }

  const std::string recon_path = (fs::path(a.out_dir) / "reconstruction.frost1").string();
  frost::write_run(recon_path, recon);
  if (!a.truth.empty())
    frost::write_csv((fs::path(a.out_dir) / "errors.csv").string(),
                     {"time", "rel_error_percent", "residual"}, error_rows);
  else
    frost::write_csv((fs::path(a.out_dir) / "errors.csv").string(), {"time", "residual"},
                     error_rows);

  ordered_json meta;
  meta["format"] = "frost-recon-meta";
  meta["grid_hash"] = hex(ctx.grid_digest);
  meta["config_hash"] = hex(ctx.config_digest);
  meta["n"] = n;
  meta["n_from_bound_curve"] = selected;
  meta["sensors"] = w.count();
  meta["noise_sd"] = noise_sd;
  meta["snapshots"] = recon.snapshots.size();
  if (!rel_errors.empty()) {
    meta["mean_rel_error_percent"] =
        std::accumulate(rel_errors.begin(), rel_errors.end(), 0.0) / rel_errors.size();
  }
  frost::write_text_file(sidecar_path(recon_path), meta.dump(2) + "\n");

  std::cout << "reconstructed " << recon.snapshots.size() << " snapshots with n = " << n;
  if (!rel_errors.empty())
    std::cout << ", mean rel error "
              << std::accumulate(rel_errors.begin(), rel_errors.end(), 0.0) / rel_errors.size()
              << "%";
  std::cout << " -> " << recon_path << "\n";
}

// ---------------------------------------------------------------- evaluate

struct EvaluateArgs {
  std::string config;
  std::string truth;
  std::string recon;
  std::string out_dir;
};

void cmd_evaluate(const EvaluateArgs& a) {
  Context ctx = make_context(a.config);
  const frost::StoredRun truth = frost::read_run(a.truth);
  const frost::StoredRun recon = frost::read_run(a.recon);
  check_grid_digest(ctx, truth.grid_digest, a.truth);
  check_grid_digest(ctx, recon.grid_digest, a.recon);
  check_sidecar(ctx, a.truth);
  check_sidecar(ctx, a.recon);
  if (truth.snapshots.size() != recon.snapshots.size())
    throw std::runtime_error("truth and reconstruction disagree on snapshot count");

  fs::create_directories(a.out_dir);

  std::vector<double> times, rel;
  for (std::size_t k = 0; k < truth.snapshots.size(); ++k) {
    if (truth.snapshots[k].time != recon.snapshots[k].time)
      throw std::runtime_error("truth and reconstruction disagree on snapshot times");
    times.push_back(truth.snapshots[k].time);
    rel.push_back(
        frost::relative_l2_error(truth.snapshots[k].temperature, recon.snapshots[k].temperature));
  }
  const double accumulated = frost::accumulated_error(times, rel);

  std::vector<std::vector<double>> rel_rows;
  for (std::size_t k = 0; k < times.size(); ++k) rel_rows.push_back({times[k], rel[k]});
  frost::write_csv((fs::path(a.out_dir) / "rel_error.csv").string(),
                   {"time", "rel_error_percent"}, rel_rows);

  ordered_json meta;
  meta["format"] = "frost-evaluation";
  meta["grid_hash"] = hex(ctx.grid_digest);
  meta["config_hash"] = hex(ctx.config_digest);
  meta["snapshots"] = times.size();
  meta["accumulated_rel_error_percent"] = accumulated;
  meta["max_rel_error_percent"] = *std::max_element(rel.begin(), rel.end());

  ordered_json points = ordered_json::array();
  std::vector<std::string> header{"time"};
  std::vector<std::vector<double>> point_rows(times.size());
  for (std::size_t k = 0; k < times.size(); ++k) point_rows[k].push_back(times[k]);
  for (std::size_t p = 0; p < ctx.cfg.points.size(); ++p) {
    const auto& pt = ctx.cfg.points[p];
    const int cell = frost::locate_point(ctx.grid, pt.x, pt.y);
    std::vector<double> t_series, r_series;
    for (std::size_t k = 0; k < times.size(); ++k) {
      t_series.push_back(truth.snapshots[k].temperature[cell]);
      r_series.push_back(recon.snapshots[k].temperature[cell]);
    }
    const auto local = frost::local_relative_error(t_series, r_series);
    const auto rate_truth = frost::freezing_rate(times, t_series);
    const auto rate_recon = frost::freezing_rate(times, r_series);

    ordered_json jp;
    jp["point"] = {pt.x, pt.y};
    jp["cell"] = cell;
    jp["mean_local_error_percent"] =
        std::accumulate(local.begin(), local.end(), 0.0) / local.size();
    jp["final_truth"] = t_series.back();
    jp["final_estimate"] = r_series.back();
    jp["peak_freezing_rate_truth"] =
        *std::min_element(rate_truth.begin(), rate_truth.end());
    jp["peak_freezing_rate_estimate"] =
        *std::min_element(rate_recon.begin(), rate_recon.end());
    points.push_back(jp);

    const std::string tag = "p" + std::to_string(p + 1);
    header.push_back(tag + "_truth");
    header.push_back(tag + "_estimate");
    header.push_back(tag + "_local_error_percent");
    for (std::size_t k = 0; k < times.size(); ++k) {
      point_rows[k].push_back(t_series[k]);
      point_rows[k].push_back(r_series[k]);
      point_rows[k].push_back(local[k]);
    }
  }
  meta["points"] = points;
  frost::write_csv((fs::path(a.out_dir) / "points.csv").string(), header, point_rows);
  frost::write_text_file((fs::path(a.out_dir) / "metrics.json").string(), meta.dump(2) + "\n");

  std::cout << "accumulated rel error " << accumulated << "% over " << times.size()
            << " snapshots -> " << (fs::path(a.out_dir) / "metrics.json").string() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"2D temperature-field reconstruction from sparse pixel sensors"};
  app.require_subcommand(1);

  std::function<void()> action;

  SimulateArgs sim;
  auto* c_sim = app.add_subcommand("simulate", "run the forward solver over parameter samples");
  c_sim->add_option("--config", sim.config, "JSON configuration overrides");
  c_sim->add_option("--out", sim.out_dir, "output directory")->required();
  c_sim->callback([&] { action = [&] { cmd_simulate(sim); }; });

  PodArgs pod;
  auto* c_pod = app.add_subcommand("pod", "build the snapshot basis from stored runs");
  c_pod->add_option("--config", pod.config, "JSON configuration overrides");
  c_pod->add_option("--runs", pod.runs_dir, "directory with run_###.frost1 files");
  c_pod->add_option("--use", pod.use, "train, test, or all (default train)");
  c_pod->add_option("--in", pod.inputs, "explicit run files (overrides --runs)");
  c_pod->add_option("--out", pod.out, "basis output path")->required();
  c_pod->callback([&] { action = [&] { cmd_pod(pod); }; });

  SensorsArgs sen;
  auto* c_sen = app.add_subcommand("sensors", "place pixel sensors for a basis");
  c_sen->add_option("--config", sen.config, "JSON configuration overrides");
  c_sen->add_option("--basis", sen.basis, "basis file")->required();
  c_sen->add_option("--out", sen.out, "layout output path")->required();
  c_sen->add_option("--method", sen.method, "greedy or regular (default greedy)");
  c_sen->add_option("--m", sen.m, "sensor budget (default ceil(1.5 n) for greedy)");
  c_sen->add_option("--n", sen.n, "dimension for greedy placement (default: config, then bound curve)");
  c_sen->callback([&] { action = [&] { cmd_sensors(sen); }; });

  BoundArgs bnd;
  auto* c_bnd = app.add_subcommand("bound", "a-priori error bound curve and dimension selection");
  c_bnd->add_option("--config", bnd.config, "JSON configuration overrides");
  c_bnd->add_option("--basis", bnd.basis, "basis file")->required();
  c_bnd->add_option("--layout", bnd.layout, "sensor layout (default: the full candidate pool)");
  c_bnd->add_option("--out", bnd.out, "JSON output path")->required();
  c_bnd->add_option("--csv", bnd.csv, "optional CSV of the curve");
  c_bnd->callback([&] { action = [&] { cmd_bound(bnd); }; });

  ReconstructArgs rec;
  auto* c_rec = app.add_subcommand("reconstruct", "estimate fields from measurements");
  c_rec->add_option("--config", rec.config, "JSON configuration overrides");
  c_rec->add_option("--basis", rec.basis, "basis file")->required();
  c_rec->add_option("--layout", rec.layout, "sensor layout")->required();
  c_rec->add_option("--truth", rec.truth, "truth run to synthesize measurements from");
  c_rec->add_option("--measurements", rec.measurements, "stored measurement series");
  c_rec->add_option("--out", rec.out_dir, "output directory")->required();
  c_rec->add_option("--dump-measurements", rec.dump_measurements,
                    "write the synthesized measurements here");
  c_rec->add_option("--n", rec.n, "dimension override");
  c_rec->add_option("--noise-sd", rec.noise_sd, "measurement noise standard deviation");
  c_rec->callback([&] { action = [&] { cmd_reconstruct(rec); }; });

  EvaluateArgs ev;
  auto* c_ev = app.add_subcommand("evaluate", "compare a reconstruction against the truth");
  c_ev->add_option("--config", ev.config, "JSON configuration overrides");
  c_ev->add_option("--truth", ev.truth, "truth run")->required();
  c_ev->add_option("--recon", ev.recon, "reconstructed run")->required();
  c_ev->add_option("--out", ev.out_dir, "output directory")->required();
  c_ev->callback([&] { action = [&] { cmd_evaluate(ev); }; });

  CLI11_PARSE(app, argc, argv);

  try {
    action();
  } catch (const std::exception& e) {
    nlohmann::json err;
    err["error"] = e.what();
    std::cerr << err.dump() << "\n";
    return 1;
  }
  return 0;
}
