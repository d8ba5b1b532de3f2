#include "vidmetrics/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "vidmetrics/dist_metrics.hpp"
#include "vidmetrics/embedder.hpp"
#include "vidmetrics/error.hpp"
#include "vidmetrics/format.hpp"
#include "vidmetrics/frame_metrics.hpp"
#include "vidmetrics/perturb.hpp"
#include "vidmetrics/studies.hpp"
#include "vidmetrics/synthgen.hpp"
#include "vidmetrics/tensor_io.hpp"

namespace vidmetrics {
namespace {

namespace fs = std::filesystem;

std::ifstream open_in(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  return in;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot open " + path.string() + " for writing");
  return out;
}

std::vector<NoiseKind> parse_kinds(const std::string& list) {
  if (list == "all") return {kAllNoiseKinds.begin(), kAllNoiseKinds.end()};
  std::vector<NoiseKind> kinds;
  std::istringstream ss(list);
  std::string name;
  while (std::getline(ss, name, ',')) {
    const auto kind = parse_noise_kind(name);
    if (!kind) throw Error(ErrorCode::kInvalidArgument, "unknown noise kind \"" + name + "\"");
    kinds.push_back(*kind);
  }
  if (kinds.empty()) throw Error(ErrorCode::kInvalidArgument, "--kinds is empty");
  return kinds;
}

std::vector<double> study_values(const StudyTable& table) {
  std::vector<double> v;
  v.reserve(table.rows.size());
  for (const auto& row : table.rows) v.push_back(row.value);
  return v;
}

struct DistArgs {
  std::string real, gen;
  bool allow_mismatch = false;
};

void add_dist_command(CLI::App& app, const char* name, DistMetric metric, DistArgs& args,
                      std::ostream& out) {
  auto* cmd = app.add_subcommand(name, std::string("Compute ") + std::string(to_string(metric)) +
                                           " between two REMB embedding files");
  cmd->add_option("--real", args.real, "Real-video embeddings (REMB)")->required();
  cmd->add_option("--gen", args.gen, "Generated-video embeddings (REMB)")->required();
  cmd->add_flag("--allow-size-mismatch", args.allow_mismatch,
                "Permit different sample counts (values are then not comparable)");
  cmd->callback([&args, &out, metric] {
    const auto real = load_embedding_file(args.real);
    const auto gen = load_embedding_file(args.gen);
    if (real.n() != gen.n() && !args.allow_mismatch) {
      throw Error(ErrorCode::kInvalidArgument,
                  "sample sizes differ (n_real=" + std::to_string(real.n()) +
                      ", n_gen=" + std::to_string(gen.n()) +
                      "); the estimate depends on sample size, so values are only comparable "
                      "at equal n. Pass --allow-size-mismatch to override.");
    }
    const auto v = distance(metric, real, gen);
    out << to_string(metric) << '=' << format_fixed(v.value) << " n_real=" << v.n_real
        << " n_gen=" << v.n_gen << '\n';
  });
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Video generation metrics: FVD, KVD, PSNR/SSIM, noise and bias studies"};
  app.require_subcommand(1);

  // gen
  std::string scenario = "sprite", out_path;
  std::size_t gen_n = 0, gen_t = 16, gen_h = 64, gen_w = 64;
  std::uint64_t seed = 0;
  auto* gen = app.add_subcommand("gen", "Generate a synthetic video corpus (RVID)");
  gen->set_help_flag("--help", "Print this help message and exit");
  gen->add_option("--scenario", scenario, "sprite|collector")->required();
  gen->add_option("--n", gen_n, "Number of videos")->required();
  gen->add_option("--t", gen_t, "Frames per video");
  gen->add_option("--h", gen_h, "Frame height");
  gen->add_option("--w", gen_w, "Frame width");
  gen->add_option("--seed", seed, "PRNG seed")->required();
  gen->add_option("--out", out_path, "Output RVID path")->required();
  gen->callback([&] {
    const auto kind = parse_scenario(scenario);
    if (!kind) throw Error(ErrorCode::kInvalidArgument, "unknown scenario \"" + scenario + "\"");
    ScenarioSpec spec;
    spec.kind = *kind;
    spec.t = gen_t;
    spec.h = gen_h;
    spec.w = gen_w;
    spec.seed = seed;
    save_video_file(generate(spec, gen_n), out_path);
  });

  // perturb
  std::string in_path, kind_name;
  int intensity = 0;
  auto* perturb = app.add_subcommand("perturb", "Apply one noise type at one intensity");
  perturb->add_option("--in", in_path, "Input RVID")->required();
  perturb->add_option("--out", out_path, "Output RVID")->required();
  perturb->add_option("--kind", kind_name, "Noise kind")->required();
  perturb->add_option("--intensity", intensity, "Intensity level")->required();
  perturb->add_option("--seed", seed, "PRNG seed")->required();
  perturb->callback([&] {
    const auto kind = parse_noise_kind(kind_name);
    if (!kind) throw Error(ErrorCode::kInvalidArgument, "unknown noise kind \"" + kind_name + "\"");
    intensity_param(*kind, intensity);
    save_video_file(apply_noise(load_video_file(in_path), {*kind, intensity, seed}), out_path);
  });

  // embed
  std::string embedder = "reference";
  std::size_t dim = 64;
  auto* embed = app.add_subcommand("embed", "Embed videos with the reference embedder");
  embed->add_option("--in", in_path, "Input RVID")->required();
  embed->add_option("--out", out_path, "Output REMB")->required();
  embed->add_option("--embedder", embedder, "Embedder kind")->check(CLI::IsMember({"reference"}));
  embed->add_option("--dim", dim, "Embedding dimension");
  embed->add_option("--seed", seed, "PRNG seed")->required();
  embed->callback([&] {
    const auto videos = load_video_file(in_path);
    save_embedding_file(
        embed_or_import({EmbedderKind::kReference, dim, seed}, &videos), out_path);
  });

  DistArgs fvd_args, kvd_args;
  add_dist_command(app, "fvd", DistMetric::kFvd, fvd_args, out);
  add_dist_command(app, "kvd", DistMetric::kKvd, kvd_args, out);

  // framemetric
  std::string metric_name, real_path, gen_path, best_dir;
  auto* frame = app.add_subcommand("framemetric", "PSNR or SSIM report as CSV");
  frame->add_option("--metric", metric_name, "psnr|ssim")->required();
  frame->add_option("--real", real_path, "Reference RVID")->required();
  frame->add_option("--gen", gen_path, "Generated RVID");
  frame->add_option("--best-of-dir", best_dir, "Directory of candidate RVID sets (best-of-N)");
  frame->add_option("--out", out_path, "Write CSV here instead of stdout");
  frame->callback([&] {
    const auto metric = parse_frame_metric(metric_name);
    if (!metric) throw Error(ErrorCode::kInvalidArgument, "unknown metric \"" + metric_name + "\"");
    if (gen_path.empty() && best_dir.empty()) {
      throw Error(ErrorCode::kInvalidArgument, "framemetric needs --gen or --best-of-dir");
    }
    const auto real = load_video_file(real_path);
    std::vector<VideoSet> candidates;
    if (!gen_path.empty()) candidates.push_back(load_video_file(gen_path));
    if (!best_dir.empty()) {
      std::vector<fs::path> files;
      for (const auto& entry : fs::directory_iterator(best_dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".rvid") files.push_back(entry.path());
      }
      std::sort(files.begin(), files.end());
      for (const auto& f : files) candidates.push_back(load_video_file(f));
    }
    const auto report = best_of_n(*metric, real, candidates);
    if (out_path.empty()) {
      write_report_csv(report, out);
    } else {
      auto file = open_out(out_path);
      write_report_csv(report, file);
    }
  });

  // bias-study
  std::vector<std::size_t> sizes;
  std::size_t repeats = 50;
  auto* bias = app.add_subcommand("bias-study", "FVD between disjoint subsets vs subset size");
  bias->add_option("--in", in_path, "Input REMB")->required();
  bias->add_option("--sizes", sizes, "Comma-separated subset sizes")->required()->delimiter(',');
  bias->add_option("--repeats", repeats, "Repeats per size");
  bias->add_option("--seed", seed, "PRNG seed")->required();
  bias->add_option("--out", out_path, "Output CSV")->required();
  bias->callback([&] {
    auto file = open_out(out_path);
    write_study_csv(bias_study(load_embedding_file(in_path), sizes, repeats, seed), file);
  });

  // noise-study
  std::string kinds = "all", study_metric = "fvd";
  auto* noise = app.add_subcommand("noise-study", "Metric vs noise intensity for each noise kind");
  noise->add_option("--in", in_path, "Clean RVID")->required();
  noise->add_option("--kinds", kinds, "all or comma-separated noise kinds");
  noise->add_option("--dim", dim, "Embedding dimension");
  noise->add_option("--metric", study_metric, "fvd|kvd")->check(CLI::IsMember({"fvd", "kvd"}));
  noise->add_option("--seed", seed, "PRNG seed")->required();
  noise->add_option("--out", out_path, "Output CSV")->required();
  noise->callback([&] {
    const auto clean = load_video_file(in_path);
    const auto kind_list = parse_kinds(kinds);
    const auto table =
        noise_study(clean, kind_list, {EmbedderKind::kReference, dim, seed},
                    study_metric == "fvd" ? DistMetric::kFvd : DistMetric::kKvd, seed);
    auto file = open_out(out_path);
    write_study_csv(table, file);
  });

  // correlate
  std::string a_path, b_path, method;
  auto* corr = app.add_subcommand("correlate", "Correlate the value columns of two study CSVs");
  corr->add_option("--a", a_path, "First study CSV")->required();
  corr->add_option("--b", b_path, "Second study CSV")->required();
  corr->add_option("--method", method, "pearson|spearman|kendall")
      ->required()
      ->check(CLI::IsMember({"pearson", "spearman", "kendall"}));
  corr->callback([&] {
    auto fa = open_in(a_path);
    auto fb = open_in(b_path);
    const auto ta = read_study_csv(fa);
    const auto tb = read_study_csv(fb);
    if (ta.rows.size() != tb.rows.size()) {
      throw Error(ErrorCode::kShapeMismatch, "study tables have different row counts");
    }
    for (std::size_t i = 0; i < ta.rows.size(); ++i) {
      if (ta.rows[i].condition != tb.rows[i].condition) {
        throw Error(ErrorCode::kShapeMismatch, "study tables disagree on condition at row " +
                                                   std::to_string(i + 1));
      }
    }
    const auto va = study_values(ta), vb = study_values(tb);
    const double r = method == "pearson" ? pearson(va, vb)
                     : method == "spearman" ? spearman(va, vb)
                                            : kendall(va, vb);
    out << method << '=' << format_fixed(r) << " n=" << va.size() << '\n';
  });

  // agreement
  std::string ratings_path, scores_path, tie_credit = "none";
  bool lower_is_better = false;
  auto* agree = app.add_subcommand("agreement", "Agreement of a metric with pairwise human ratings");
  agree->add_option("--ratings", ratings_path, "Ratings CSV")->required();
  agree->add_option("--scores", scores_path, "Model scores CSV (model,score)")->required();
  agree->add_flag("--lower-is-better", lower_is_better, "Lower metric values are better");
  agree->add_option("--tie-credit", tie_credit, "none|half")->check(CLI::IsMember({"none", "half"}));
  agree->callback([&] {
    auto fr = open_in(ratings_path);
    auto fsc = open_in(scores_path);
    const auto prefs = read_preferences_csv(fr);
    const auto scores = read_scores_csv(fsc);
    const double a = rater_agreement(prefs, scores, lower_is_better,
                                     tie_credit == "half" ? TieCredit::kHalf : TieCredit::kNone);
    out << "agreement=" << format_fixed(a) << " ratings=" << prefs.size();
    try {
      out << " inter_rater=" << format_fixed(inter_rater_agreement(prefs));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kInsufficientSamples) throw;
    }
    out << '\n';
  });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(std::move(reversed));
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const Error& e) {
    err << "error (" << to_string(e.code()) << "): " << e.what() << '\n';
    return is_usage_error(e.code()) ? 1 : 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

}  // namespace vidmetrics
