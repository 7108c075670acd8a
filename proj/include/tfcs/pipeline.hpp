#pragma once

#include <chrono>
#include <type_traits>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "tfcs/error.hpp"
#include "tfcs/ifest.hpp"
#include "tfcs/imagequant.hpp"
#include "tfcs/mask.hpp"
#include "tfcs/plot.hpp"
#include "tfcs/png.hpp"
#include "tfcs/signals.hpp"
#include "tfcs/tfa.hpp"
#include "tfcs/tracks_csv.hpp"
#include "tfcs/tv.hpp"

namespace tfcs {

enum class MaskKind { uniform, banded };

struct RunConfig {
  SignalSpec signal;
  WindowKind window = WindowKind::hann;
  std::size_t wlen = 64;
  std::size_t fft_len = 256;
  std::size_t sm_l = 6;
  MaskKind mask = MaskKind::banded;
  double retain = 0.46;
  BandedScheme banded;
  std::uint64_t seed = 1;
  TvParams tv;
  std::optional<std::size_t> edge_guard;  // defaults to wlen / 2
  double tol_bins = 2.0;
  std::filesystem::path out_dir = "out";
  bool png = true;

  std::size_t resolved_edge_guard() const { return edge_guard.value_or(wlen / 2); }

  MaskScheme mask_scheme() const {
    if (mask == MaskKind::uniform) return UniformScheme{retain};
    return banded;
  }
};

inline nlohmann::json to_json(const RunConfig& c) {
  return {{"signal", std::string(to_string(c.signal.kind))},
          {"n", c.signal.n_samples},
          {"fs", c.signal.fs},
          {"t0", c.signal.t0},
          {"window", std::string(to_string(c.window))},
          {"wlen", c.wlen},
          {"fft_len", c.fft_len},
          {"sm_l", c.sm_l},
          {"mask", c.mask == MaskKind::uniform ? "uniform" : "banded"},
          {"retain", c.retain},
          {"p_high", c.banded.p_high},
          {"p_low", c.banded.p_low},
          {"low_band", c.banded.low_band_fraction},
          {"seed", c.seed},
          {"epsilon", c.tv.epsilon},
          {"step", c.tv.step},
          {"max_iters", c.tv.max_iters},
          {"tol", c.tv.tol},
          {"edge_guard", c.resolved_edge_guard()},
          {"tol_bins", c.tol_bins},
          {"out_dir", c.out_dir.generic_string()},
          {"png", c.png}};
}

// Overlays the keys present in `j` onto `base`. Unknown keys are rejected.
inline RunConfig config_from_json(const nlohmann::json& j, RunConfig base = {}) {
  if (!j.is_object()) throw ParameterError("config: expected a JSON object");
  static const std::set<std::string> known = {
      "signal", "n",      "fs",        "t0",  "window",     "wlen",     "fft_len", "sm_l",
      "mask",   "retain", "p_high",    "p_low", "low_band", "seed",     "epsilon", "step",
      "max_iters", "tol", "edge_guard", "tol_bins", "out_dir", "png"};
  for (const auto& [key, value] : j.items()) {
    if (!known.contains(key)) throw ParameterError("config: unknown key '" + key + "'");
  }
  try {
    auto& c = base;
    if (j.contains("signal")) c.signal.kind = parse_signal_kind(j["signal"].get<std::string>());
    if (j.contains("n")) c.signal.n_samples = j["n"].get<std::size_t>();
    if (j.contains("fs")) c.signal.fs = j["fs"].get<double>();
    if (j.contains("t0")) c.signal.t0 = j["t0"].get<double>();
    if (j.contains("window")) c.window = parse_window_kind(j["window"].get<std::string>());
    if (j.contains("wlen")) c.wlen = j["wlen"].get<std::size_t>();
    if (j.contains("fft_len")) c.fft_len = j["fft_len"].get<std::size_t>();
    if (j.contains("sm_l")) c.sm_l = j["sm_l"].get<std::size_t>();
    if (j.contains("mask")) {
      const auto m = j["mask"].get<std::string>();
      if (m == "uniform") c.mask = MaskKind::uniform;
      else if (m == "banded") c.mask = MaskKind::banded;
      else throw ParameterError("config: unknown mask scheme '" + m + "'");
    }
    if (j.contains("retain")) c.retain = j["retain"].get<double>();
    if (j.contains("p_high")) c.banded.p_high = j["p_high"].get<double>();
    if (j.contains("p_low")) c.banded.p_low = j["p_low"].get<double>();
    if (j.contains("low_band")) c.banded.low_band_fraction = j["low_band"].get<double>();
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("epsilon")) c.tv.epsilon = j["epsilon"].get<double>();
    if (j.contains("step")) c.tv.step = j["step"].get<double>();
    if (j.contains("max_iters")) c.tv.max_iters = j["max_iters"].get<std::size_t>();
    if (j.contains("tol")) c.tv.tol = j["tol"].get<double>();
    if (j.contains("edge_guard")) c.edge_guard = j["edge_guard"].get<std::size_t>();
    if (j.contains("tol_bins")) c.tol_bins = j["tol_bins"].get<double>();
    if (j.contains("out_dir")) c.out_dir = j["out_dir"].get<std::string>();
    if (j.contains("png")) c.png = j["png"].get<bool>();
  } catch (const nlohmann::json::exception& e) {
    throw ParameterError(std::string("config: ") + e.what());
  }
  return base;
}

inline RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ParameterError("config: cannot open '" + path.string() + "'");
  try {
    return config_from_json(nlohmann::json::parse(is));
  } catch (const nlohmann::json::parse_error& e) {
    throw ParameterError(std::string("config: ") + e.what());
  }
}

// Error from one pipeline stage; what() is prefixed with the stage name.
class StageError : public std::runtime_error {
 public:
  StageError(std::string stage, const std::string& message)
      : std::runtime_error("[" + stage + "] " + message), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

struct StageTiming {
  std::string stage;
  double milliseconds = 0.0;
};

struct RunReport {
  RunConfig config;
  std::size_t observed_pixels = 0;
  std::size_t total_pixels = 0;
  InpaintResult solver;  // image omitted from serialization
  ErrorReport original_vs_reconstructed;
  ErrorReport analytic_vs_original;
  ErrorReport analytic_vs_reconstructed;
  std::vector<StageTiming> timings;
  std::vector<std::string> files;
  std::vector<std::string> notes;
};

inline nlohmann::json metrics_json(const ErrorReport& e, double tol_bins) {
  return {{"valid_columns", e.valid_count},     {"mse_hz2", e.mse},
          {"max_abs_hz", e.max_abs},           {"mean_abs_hz", e.mean_abs},
          {"mean_abs_bins", e.mean_abs_bins},  {"tol_bins", tol_bins},
          {"frac_within_tol", e.frac_within(tol_bins)}, {"frac_within_1_bin", e.frac_within(1.0)}};
}

// Everything except timings, so equal configs serialize identically.
inline nlohmann::json to_json(const RunReport& r) {
  const double tol = r.config.tol_bins;
  return {{"parameters", to_json(r.config)},
          {"mask", {{"observed_pixels", r.observed_pixels}, {"total_pixels", r.total_pixels}}},
          {"solver",
           {{"iterations", r.solver.iterations},
            {"initial_objective", r.solver.objective_history.front()},
            {"final_objective", r.solver.objective},
            {"converged", r.solver.converged}}},
          {"metrics",
           {{"original_vs_reconstructed", metrics_json(r.original_vs_reconstructed, tol)},
            {"analytic_vs_original", metrics_json(r.analytic_vs_original, tol)},
            {"analytic_vs_reconstructed", metrics_json(r.analytic_vs_reconstructed, tol)}}},
          {"files", r.files},
          {"notes", r.notes}};
}

inline nlohmann::json timings_json(const RunReport& r) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& t : r.timings) j[t.stage + "_ms"] = t.milliseconds;
  return j;
}

namespace detail {

// Records files as they are written and deletes them unless committed.
class OutputSet {
 public:
  explicit OutputSet(std::filesystem::path dir) : dir_(std::move(dir)) {
    created_dir_ = !std::filesystem::exists(dir_);
    std::filesystem::create_directories(dir_);
  }
  OutputSet(const OutputSet&) = delete;
  OutputSet& operator=(const OutputSet&) = delete;
  ~OutputSet() {
    if (committed_) return;
    std::error_code ec;
    for (const auto& f : files_) std::filesystem::remove(dir_ / f, ec);
    if (created_dir_ && std::filesystem::is_empty(dir_, ec)) std::filesystem::remove(dir_, ec);
  }

  std::filesystem::path add(const std::string& name) {
    files_.push_back(name);
    return dir_ / name;
  }
  const std::vector<std::string>& names() const { return files_; }
  void commit() { committed_ = true; }

 private:
  std::filesystem::path dir_;
  std::vector<std::string> files_;
  bool created_dir_ = false;
  bool committed_ = false;
};

template <typename F>
auto run_stage(const std::string& name, std::vector<StageTiming>& timings, F&& body) {
  const auto start = std::chrono::steady_clock::now();
  auto record = [&] {
    const std::chrono::duration<double, std::milli> dt = std::chrono::steady_clock::now() - start;
    timings.push_back({name, dt.count()});
  };
  try {
    if constexpr (std::is_void_v<decltype(body())>) {
      body();
      record();
    } else {
      auto out = body();
      record();
      return out;
    }
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(name, e.what());
  }
}

}  // namespace detail

// generate -> S-method -> 8-bit image -> mask -> TV reconstruction -> IF of
// both images -> comparison. Writes images, mask, tracks CSV, plots,
// report.json and timings.json into config.out_dir.
inline RunReport run_pipeline(const RunConfig& config) {
  RunReport report;
  report.config = config;
  report.notes.push_back(
      "images are stored as lossless 8-bit grayscale (PGM/PNG) instead of JPEG so that only the "
      "discarded pixels differ between original and reconstruction");
  auto& timings = report.timings;
  const std::size_t guard = config.resolved_edge_guard();

  std::optional<detail::OutputSet> outputs;
  detail::run_stage("output", timings, [&] { outputs.emplace(config.out_dir); });

  const auto signal = detail::run_stage("generate", timings, [&] { return generate(config.signal); });
  const auto map = detail::run_stage("analyze", timings, [&] {
    const auto window = make_window(config.window, config.wlen);
    return s_method(stft(signal, window, config.fft_len), SmParams{config.sm_l});
  });
  const auto original = detail::run_stage("quantize", timings, [&] { return quantize(map); });

  const auto mask = detail::run_stage("mask", timings, [&] {
    return make_mask({original.rows(), original.cols()}, config.mask_scheme(), config.seed);
  });
  report.observed_pixels = mask.observed_count();
  report.total_pixels = static_cast<std::size_t>(mask.observed.size());
  const auto damaged = detail::run_stage("damage", timings, [&] { return apply_mask(original, mask); });

  report.solver = detail::run_stage("reconstruct", timings, [&] { return tv_inpaint(damaged, mask, config.tv); });
  // stored and analyzed as an 8-bit image, like the original
  const GrayImage reconstructed = to_8bit(report.solver.image);

  detail::run_stage("estimate", timings, [&] {
    const auto track_original = estimate_if(original, guard);
    const auto track_reconstructed = estimate_if(reconstructed, guard);
    const auto track_analytic = analytic_track(config.signal, config.fft_len, guard);
    report.original_vs_reconstructed = if_error(track_original, track_reconstructed);
    report.analytic_vs_original = if_error(track_analytic, track_original);
    report.analytic_vs_reconstructed = if_error(track_analytic, track_reconstructed);

    std::vector<TrackRow> rows;
    for (std::size_t n = 0; n < track_original.size(); ++n) {
      const double t = config.signal.time_at(n);
      rows.push_back({n, t, analytic_if(config.signal.kind, t), track_original.freq[n],
                      track_reconstructed.freq[n], report.original_vs_reconstructed.error_hz[n],
                      report.original_vs_reconstructed.joint_valid[n]});
    }
    write_tracks_csv(rows, outputs->add("tracks.csv"));
  });

  detail::run_stage("write", timings, [&] {
    write_pgm(original, outputs->add("original.pgm"));
    outputs->add("original.json");
    write_pgm(damaged, outputs->add("damaged.pgm"));
    outputs->add("damaged.json");
    write_pgm(reconstructed, outputs->add("reconstructed.pgm"));
    outputs->add("reconstructed.json");
    write_mask(mask, outputs->add("mask.pgm"));
    outputs->add("mask.json");
    if (config.png) {
      write_png(original, outputs->add("original.png"));
      write_png(damaged, outputs->add("damaged.png"));
      write_png(reconstructed, outputs->add("reconstructed.png"));
    }
  });

  detail::run_stage("plot", timings, [&] {
    outputs->add("if_overlay.png");
    outputs->add("if_error.png");
    render_plots(config.out_dir / "tracks.csv", config.out_dir);
  });

  detail::run_stage("report", timings, [&] {
    report.files = outputs->names();
    report.files.push_back("report.json");
    report.files.push_back("timings.json");
    {
      std::ofstream os(outputs->add("report.json"), std::ios::binary);
      os << to_json(report).dump(2) << '\n';
      if (!os) throw std::runtime_error("cannot write report.json");
    }
    std::ofstream os(outputs->add("timings.json"), std::ios::binary);
    os << timings_json(report).dump(2) << '\n';
    if (!os) throw std::runtime_error("cannot write timings.json");
  });

  outputs->commit();
  return report;
}

}  // namespace tfcs
