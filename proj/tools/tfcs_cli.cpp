// Command-line front end: individual stages plus the end-to-end `run`.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "tfcs/pipeline.hpp"
#include "tfcs/tfcs.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Flags are collected into a JSON object keyed like the config file, then
// overlaid on the config so that a given flag always wins.
struct Overrides {
  json values = json::object();
  std::optional<std::string> config_path;

  tfcs::RunConfig resolve() const {
    tfcs::RunConfig base = config_path ? tfcs::load_config(*config_path) : tfcs::RunConfig{};
    return tfcs::config_from_json(values, base);
  }
};

template <typename T>
void flag(CLI::App* app, const std::string& name, const std::string& key, Overrides& o, const std::string& help) {
  app->add_option_function<T>(name, [&o, key](const T& v) { o.values[key] = v; }, help);
}

void signal_flags(CLI::App* app, Overrides& o) {
  app->add_option_function<std::string>("--signal", [&o](const std::string& v) { o.values["signal"] = v; },
                                        "Test signal")
      ->check(CLI::IsMember({"slow", "fast", "chirp"}));
  flag<std::size_t>(app, "--n", "n", o, "Number of samples");
  flag<double>(app, "--fs", "fs", o, "Sample rate [Hz]");
  flag<double>(app, "--t0", "t0", o, "Start time [s]");
}

void tf_flags(CLI::App* app, Overrides& o) {
  app->add_option_function<std::string>("--window", [&o](const std::string& v) { o.values["window"] = v; },
                                        "STFT window")
      ->check(CLI::IsMember({"rect", "hann"}));
  flag<std::size_t>(app, "--wlen", "wlen", o, "Window length (even)");
  flag<std::size_t>(app, "--fft-len", "fft_len", o, "FFT length K (even, >= wlen)");
  flag<std::size_t>(app, "--sm-l", "sm_l", o, "S-method half-width L");
}

void mask_flags(CLI::App* app, Overrides& o) {
  app->add_option_function<std::string>("--mask", [&o](const std::string& v) { o.values["mask"] = v; },
                                        "Mask scheme")
      ->check(CLI::IsMember({"uniform", "banded"}));
  flag<double>(app, "--retain", "retain", o, "Uniform scheme: kept fraction");
  flag<double>(app, "--p-high", "p_high", o, "Banded scheme: fraction of all pixels kept from the high band");
  flag<double>(app, "--p-low", "p_low", o, "Banded scheme: fraction of all pixels kept from the low band");
  flag<double>(app, "--low-band", "low_band", o, "Banded scheme: centered fraction of rows forming the low band");
  flag<std::uint64_t>(app, "--seed", "seed", o, "RNG seed");
}

void tv_flags(CLI::App* app, Overrides& o) {
  flag<double>(app, "--epsilon", "epsilon", o, "TV smoothing (pixel units)");
  flag<double>(app, "--step", "step", o, "Initial step size");
  flag<std::size_t>(app, "--max-iters", "max_iters", o, "Iteration limit");
  flag<double>(app, "--tol", "tol", o, "Relative objective change to stop at");
}

void common_flags(CLI::App* app, Overrides& o) {
  app->add_option_function<std::string>("--config", [&o](const std::string& v) { o.config_path = v; },
                                        "JSON config file (flags override it)");
  flag<std::string>(app, "--out-dir", "out_dir", o, "Output directory");
}

tfcs::TFMap analyze_signal(const tfcs::RunConfig& c, bool spectrogram_only) {
  const auto signal = tfcs::generate(c.signal);
  const auto s = tfcs::stft(signal, tfcs::make_window(c.window, c.wlen), c.fft_len);
  return spectrogram_only ? tfcs::spectrogram(s) : tfcs::s_method(s, {c.sm_l});
}

void print_metrics(const char* name, const tfcs::ErrorReport& e, double tol_bins) {
  std::printf("%-28s mse %.4g Hz^2  max %.4g Hz  mean %.4g bins  within %.3g bins: %.4f\n", name, e.mse,
              e.max_abs, e.mean_abs_bins, tol_bins, e.frac_within(tol_bins));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Time-frequency image recovery by TV inpainting and IF estimation"};
  app.require_subcommand(1);
  Overrides o;
  std::string stage = "cli";

  auto* gen = app.add_subcommand("generate", "Write a test signal as CSV (n,t_seconds,re,im)");
  signal_flags(gen, o);
  common_flags(gen, o);
  std::string gen_out;
  gen->add_option("--out", gen_out, "CSV path (default: stdout)");

  auto* ana = app.add_subcommand("analyze", "Compute the S-method and store it as an 8-bit image");
  signal_flags(ana, o);
  tf_flags(ana, o);
  common_flags(ana, o);
  bool spectrogram_only = false;
  ana->add_flag("--spectrogram", spectrogram_only, "Store the spectrogram instead of the S-method");
  bool ana_png = false;
  ana->add_flag("--png", ana_png, "Also write a PNG copy");

  auto* msk = app.add_subcommand("mask", "Generate a pixel mask");
  mask_flags(msk, o);
  common_flags(msk, o);
  std::string like;
  Eigen::Index rows = 0, cols = 0;
  msk->add_option("--like", like, "Take dimensions from this PGM");
  msk->add_option("--rows", rows, "Mask rows");
  msk->add_option("--cols", cols, "Mask columns");

  auto* rec = app.add_subcommand("reconstruct", "Recover missing pixels by TV minimization");
  tv_flags(rec, o);
  common_flags(rec, o);
  std::string rec_image, rec_mask;
  rec->add_option("--image", rec_image, "Damaged or original PGM")->required();
  rec->add_option("--mask", rec_mask, "Mask PGM (with sidecar JSON)")->required();

  auto* est = app.add_subcommand("estimate", "Estimate the IF track of an image (n,bin,freq_hz,valid)");
  common_flags(est, o);
  flag<std::size_t>(est, "--edge-guard", "edge_guard", o, "Columns excluded at each end (default wlen/2)");
  std::string est_image, est_out;
  est->add_option("--image", est_image, "PGM with sidecar JSON")->required();
  est->add_option("--out", est_out, "CSV path (default: stdout)");

  auto* run = app.add_subcommand("run", "End-to-end: signal -> S-method -> mask -> TV -> IF comparison");
  signal_flags(run, o);
  tf_flags(run, o);
  mask_flags(run, o);
  tv_flags(run, o);
  common_flags(run, o);
  flag<std::size_t>(run, "--edge-guard", "edge_guard", o, "Columns excluded at each end (default wlen/2)");
  flag<double>(run, "--tol-bins", "tol_bins", o, "Tolerance for frac_within, in bins");
  run->add_flag_function("--no-png", [&o](std::int64_t) { o.values["png"] = false; }, "Skip PNG image copies");

  auto* plt = app.add_subcommand("plot", "Render IF overlay and error plots from a tracks CSV");
  common_flags(plt, o);
  std::string plot_csv;
  plt->add_option("--csv", plot_csv, "tracks.csv from `run`")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    stage = "config";
    const tfcs::RunConfig c = o.resolve();

    if (*gen) {
      stage = "generate";
      const auto x = tfcs::generate(c.signal);
      std::ofstream file;
      if (!gen_out.empty()) file.open(gen_out);
      std::ostream& os = gen_out.empty() ? std::cout : file;
      os << "n,t_seconds,re,im\n";
      for (std::size_t n = 0; n < x.size(); ++n) {
        os << n << ',' << tfcs::detail::format_double(x.time_at(n)) << ','
           << tfcs::detail::format_double(x.samples[n].real()) << ','
           << tfcs::detail::format_double(x.samples[n].imag()) << '\n';
      }
    } else if (*ana) {
      stage = "analyze";
      const auto img = tfcs::quantize(analyze_signal(c, spectrogram_only));
      fs::create_directories(c.out_dir);
      const auto path = c.out_dir / (spectrogram_only ? "spectrogram.pgm" : "smethod.pgm");
      tfcs::write_pgm(img, path);
      if (ana_png) tfcs::write_png(img, fs::path(path).replace_extension(".png"));
      std::cout << path.string() << '\n';
    } else if (*msk) {
      stage = "mask";
      if (!like.empty()) {
        const auto img = tfcs::read_pgm(like);
        rows = img.rows();
        cols = img.cols();
      }
      const auto mask = tfcs::make_mask({rows, cols}, c.mask_scheme(), c.seed);
      fs::create_directories(c.out_dir);
      tfcs::write_mask(mask, c.out_dir / "mask.pgm");
      std::cout << (c.out_dir / "mask.pgm").string() << ": " << mask.observed_count() << " of "
                << mask.observed.size() << " pixels observed\n";
    } else if (*rec) {
      stage = "reconstruct";
      const auto mask = tfcs::read_mask(rec_mask);
      const auto damaged = tfcs::apply_mask(tfcs::read_pgm(rec_image), mask);
      const auto result = tfcs::tv_inpaint(damaged, mask, c.tv);
      fs::create_directories(c.out_dir);
      tfcs::write_pgm(tfcs::to_8bit(result.image), c.out_dir / "reconstructed.pgm");
      std::cout << "iterations " << result.iterations << ", objective " << result.objective_history.front()
                << " -> " << result.objective << (result.converged ? " (converged)" : " (iteration limit)")
                << '\n';
    } else if (*est) {
      stage = "estimate";
      const auto img = tfcs::read_pgm(est_image);
      const auto track = tfcs::estimate_if(img, c.resolved_edge_guard());
      std::ofstream file;
      if (!est_out.empty()) file.open(est_out);
      std::ostream& os = est_out.empty() ? std::cout : file;
      os << "n,bin,freq_hz,valid\n";
      for (std::size_t n = 0; n < track.size(); ++n) {
        os << n << ',' << track.bin[n] << ',' << tfcs::detail::format_double(track.freq[n]) << ','
           << (track.valid[n] ? 1 : 0) << '\n';
      }
    } else if (*run) {
      const auto report = tfcs::run_pipeline(c);
      std::printf("observed %zu of %zu pixels; solver %zu iterations, TV %.6g -> %.6g%s\n", report.observed_pixels,
                  report.total_pixels, report.solver.iterations, report.solver.objective_history.front(),
                  report.solver.objective, report.solver.converged ? "" : " (iteration limit)");
      print_metrics("original vs reconstructed", report.original_vs_reconstructed, c.tol_bins);
      print_metrics("analytic vs original", report.analytic_vs_original, c.tol_bins);
      print_metrics("analytic vs reconstructed", report.analytic_vs_reconstructed, c.tol_bins);
      std::printf("outputs in %s\n", c.out_dir.string().c_str());
    } else if (*plt) {
      stage = "plot";
      const auto files = tfcs::render_plots(plot_csv, c.out_dir);
      std::cout << files.if_overlay.string() << '\n' << files.error.string() << '\n';
    }
  } catch (const tfcs::StageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: [" << stage << "] " << e.what() << '\n';
    return 2;
  }
  return 0;
}
