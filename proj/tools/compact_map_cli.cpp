// compact-map: simulate datasets, build standard or compact maps, compare
// growth curves.
//
// Exit codes: 0 success, 1 usage, 2 data error, 3 numerical failure.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "compact_map/dataset_io.hpp"
#include "compact_map/error.hpp"
#include "compact_map/pipeline.hpp"
#include "compact_map/simulator.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumerical = 3;

struct SimFlags {
  std::string preset = "figure-eight";
  std::uint64_t seed = 1;
  std::optional<int> laps;
  std::optional<double> noise_d;
  std::optional<double> noise_theta;

  void attach(CLI::App* app) {
    app->add_option("--preset", preset, "Route preset")
        ->check(CLI::IsMember(compact_map::preset_names()));
    app->add_option("--seed", seed, "Simulator seed");
    app->add_option("--laps", laps, "Laps of the route (preset default)");
    app->add_option("--noise-d", noise_d, "Odometry sigma on d, m per step");
    app->add_option("--noise-theta", noise_theta,
                    "Odometry sigma on facing, rad per step");
  }

  compact_map::SimConfig build() const {
    compact_map::SimConfig sim = compact_map::preset(preset);
    sim.seed = seed;
    if (laps) sim.laps = *laps;
    if (noise_d) sim.odom_noise.sigma_d = *noise_d;
    if (noise_theta) sim.odom_noise.sigma_theta = *noise_theta;
    return sim;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Compact pose-graph mapping back end"};
  app.require_subcommand(1);

  // simulate
  SimFlags sim_flags;
  std::string sim_out = "events.txt";
  CLI::App* simulate = app.add_subcommand("simulate", "Write a synthetic event stream");
  sim_flags.attach(simulate);
  simulate->add_option("--out", sim_out, "Event file to write");

  // run
  SimFlags run_sim;
  compact_map::PipelineConfig pipeline;
  std::string mode = "compact-full";
  std::string input;
  std::string out_dir = "out";
  auto& mc = pipeline.mapper;
  CLI::App* run = app.add_subcommand("run", "Build a map and write metrics");
  run->add_option("--mode", mode, "standard | compact-integration-only | compact-full")
      ->check(CLI::IsMember({"standard", "compact-integration-only", "compact-full"}));
  run->add_option("--alpha", mc.neighborhood.alpha, "Translation weight, 1/m");
  run->add_option("--beta", mc.neighborhood.beta, "Rotation weight, 1/rad");
  run->add_option("--delta", mc.neighborhood.delta_threshold, "Neighborhood field threshold");
  run->add_option("--t-interval", mc.clusters.t_interval, "Max gap inside a loop cluster, s");
  run->add_option("--t-total", mc.clusters.t_total, "Max span of a loop cluster, s");
  run->add_option("--merge-radius", mc.integration.merge_radius, "Revisit merge radius, m");
  run->add_option("--short-edge", mc.integration.short_edge_threshold, "Short edge threshold, m");
  run->add_option("--huber-delta", mc.solver.huber_delta, "Huber loss scale");
  run->add_option("--in", input, "Event file to replay instead of simulating");
  run->add_option("--out", out_dir, "Output directory");
  run_sim.attach(run);

  // compare
  std::string metrics_a;
  std::string metrics_b;
  bool summary_only = false;
  CLI::App* cmp = app.add_subcommand("compare", "Align two metrics files by stamp");
  cmp->add_option("metrics_a", metrics_a, "First metrics.csv")->required();
  cmp->add_option("metrics_b", metrics_b, "Second metrics.csv")->required();
  cmp->add_flag("--summary", summary_only, "Print only the final summary line");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*simulate) {
      compact_map::SimConfig sim;
      try {
        sim = sim_flags.build();
        sim.validate();
      } catch (const compact_map::DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
      }
      const auto result = compact_map::generate(sim);
      compact_map::write_events(result.events, sim_out);
      std::cout << "wrote " << result.events.size() << " events ("
                << result.steps_per_lap << " steps per lap) to " << sim_out
                << '\n';
      return 0;
    }

    if (*run) {
      try {
        mc.mode = compact_map::parse_mode(mode);
        mc.validate();
        pipeline.sim = run_sim.build();
        if (input.empty()) {
          pipeline.sim.validate();
        }
      } catch (const compact_map::DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
      }
      if (!input.empty()) {
        pipeline.input = input;
      }
      pipeline.output_dir = out_dir;
      const auto report = compact_map::run(pipeline);
      const auto& t = report.totals;
      std::cout << "mode " << mode << ": " << t.events << " events, "
                << t.vertices << " vertices, " << t.edges << " edges, "
                << t.optimize_calls << " optimizations, " << t.loops_added
                << " loop edges (" << t.loops_ignored << " ignored)\n"
                << "map: " << report.map_path.string() << '\n'
                << "metrics: " << report.metrics_path.string() << '\n';
      return 0;
    }

    if (*cmp) {
      const auto summary = compact_map::compare(metrics_a, metrics_b);
      std::string text = compact_map::format_comparison(summary);
      if (summary_only) {
        text = text.substr(text.rfind("# "));
      }
      std::cout << text;
      return 0;
    }
  } catch (const compact_map::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const compact_map::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}
