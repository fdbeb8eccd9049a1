// Command-line front end: one subcommand per library stage plus the full
// pipeline. Results go to stdout as JSON; weight files go to --out-dir.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "transference/ap_count.hpp"
#include "transference/dense_model.hpp"
#include "transference/discrepancy.hpp"
#include "transference/errors.hpp"
#include "transference/linear_forms.hpp"
#include "transference/parallel.hpp"
#include "transference/pipeline.hpp"
#include "transference/report.hpp"
#include "transference/weightfn.hpp"

namespace fs = std::filesystem;
namespace tr = transference;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";

struct Globals {
  std::uint64_t seed = 7;
  unsigned threads = 0;
  std::string out_dir = ".";
  std::string format = "json";
};

void emit(const json& doc) { std::cout << doc.dump(2) << '\n'; }

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw tr::StageError("cannot write " + path.string());
  out << text;
}

std::string extension(tr::FileFormat format) {
  return format == tr::FileFormat::json ? ".json" : ".csv";
}

fs::path in_out_dir(const Globals& g, const std::string& name) {
  fs::path p(name);
  return p.is_absolute() || p.has_parent_path() ? p : fs::path(g.out_dir) / p;
}

tr::LinearForm form_for(const tr::Group& group, int j) {
  if (j < 1 || j > group.ap_length()) {
    throw tr::PreconditionError("j must lie in 1.." + std::to_string(group.ap_length()));
  }
  return tr::LinearForm(group, j);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical lab for the transference argument over Z_N"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--seed", g.seed, "Master seed");
  app.add_option("--threads", g.threads, "Worker threads (0 = all cores)");
  app.add_option("--out-dir", g.out_dir, "Directory for written files");
  app.add_option("--format", g.format, "Weight file format")
      ->check(CLI::IsMember({"json", "csv"}));

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a majorant nu and a planted f");
  std::uint64_t gen_n = 101;
  int gen_k = 3;
  std::string gen_kind = "random_sparse";
  double gen_p = 0.3, gen_delta = 0.5;
  gen->add_option("--N", gen_n)->required();
  gen->add_option("--k", gen_k);
  gen->add_option("--generator", gen_kind);
  gen->add_option("--p", gen_p);
  gen->add_option("--delta", gen_delta);

  // lfc
  auto* lfc = app.add_subcommand("lfc", "Linear forms condition sweep on nu");
  std::string lfc_nu;
  std::size_t lfc_patterns = 16;
  std::uint64_t lfc_samples = 100000;
  bool lfc_exact = false;
  lfc->add_option("--nu", lfc_nu)->required();
  lfc->add_option("--patterns", lfc_patterns);
  lfc->add_option("--samples", lfc_samples);
  lfc->add_flag("--exact", lfc_exact);

  // disc
  auto* disc = app.add_subcommand("disc", "Search for a product test separating g from gtilde");
  std::string disc_g, disc_h;
  int disc_j = 1;
  std::uint64_t disc_restarts = 8;
  bool disc_no_witness = false;
  disc->add_option("--g", disc_g)->required();
  disc->add_option("--gtilde", disc_h)->required();
  disc->add_option("--j", disc_j);
  disc->add_option("--restarts", disc_restarts);
  disc->add_flag("--no-witness", disc_no_witness);

  // boxnorm
  auto* box = app.add_subcommand("boxnorm", "Box norm bound on the discrepancy of (nu, 1)");
  std::string box_nu;
  int box_j = 1;
  std::uint64_t box_samples = 1000000;
  double box_budget = tr::kDefaultBoundBudget;
  box->add_option("--nu", box_nu)->required();
  box->add_option("--j", box_j);
  box->add_option("--samples", box_samples);
  box->add_option("--budget", box_budget);

  // model
  auto* model = app.add_subcommand("model", "Extract a dense model of f");
  std::string model_f, model_nu, model_out = "fmodel.json";
  double model_eps = 0.05;
  std::size_t model_iters = 500;
  std::uint64_t model_restarts = 8;
  model->add_option("--f", model_f)->required();
  model->add_option("--nu", model_nu)->required();
  model->add_option("--eps", model_eps);
  model->add_option("--max-iters", model_iters);
  model->add_option("--restarts", model_restarts);
  model->add_option("--out", model_out);

  // count
  auto* count = app.add_subcommand("count", "k-AP density of f");
  std::string count_f, count_method = "direct";
  int count_k = 3;
  count->add_option("--f", count_f)->required();
  count->add_option("--k", count_k);
  count->add_option("--method", count_method)->check(CLI::IsMember({"direct", "fourier"}));

  // pipeline
  auto* pipe = app.add_subcommand("pipeline", "Run every stage and persist the report");
  std::string pipe_config;
  tr::PipelineConfig over;
  pipe->add_option("--config", pipe_config, "PipelineConfig JSON");
  auto* o_n = pipe->add_option("--N", over.N);
  auto* o_k = pipe->add_option("--k", over.k);
  auto* o_gen = pipe->add_option("--generator", over.generator);
  auto* o_p = pipe->add_option("--p", over.p);
  auto* o_delta = pipe->add_option("--delta", over.delta);
  auto* o_eps = pipe->add_option("--eps", over.epsilon);
  auto* o_samples = pipe->add_option("--samples", over.samples);
  auto* o_patterns = pipe->add_option("--patterns", over.patterns);
  auto* o_restarts = pipe->add_option("--restarts", over.restarts);
  auto* o_iters = pipe->add_option("--max-iters", over.max_iters);
  auto* o_lfc = pipe->add_option("--lfc-mode", over.lfc_mode);

  app.add_subcommand("version", "Print the version");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    tr::set_thread_count(g.threads);
    const tr::FileFormat format = tr::parse_file_format(g.format);

    if (*gen) {
      const tr::Group group = tr::Group::make(gen_n, gen_k);
      tr::GeneratorSpec spec{tr::parse_generator_kind(gen_kind), gen_p, gen_delta, g.seed};
      const tr::GeneratedPair pair = tr::generate(group, spec);
      const fs::path nu_path = in_out_dir(g, "nu" + extension(format));
      const fs::path f_path = in_out_dir(g, "f" + extension(format));
      fs::create_directories(g.out_dir);
      tr::write_weight_file(nu_path, pair.nu, format);
      tr::write_weight_file(f_path, pair.f, format);
      emit({{"N", gen_n},
            {"k", gen_k},
            {"generator", gen_kind},
            {"seed", g.seed},
            {"support_size", pair.support.size()},
            {"mean_nu", tr::mean(pair.nu)},
            {"mean_f", tr::mean(pair.f)},
            {"nu", nu_path.string()},
            {"f", f_path.string()}});
    } else if (*lfc) {
      const tr::WeightFn nu = tr::read_weight_file(lfc_nu);
      const tr::LfcSweep sweep =
          tr::lfc_sweep(nu, lfc_patterns, lfc_samples, g.seed,
                        lfc_exact ? tr::LfcMode::exact : tr::LfcMode::monte_carlo);
      json reports = json::array();
      for (const auto& r : sweep.reports) reports.push_back(tr::to_json(r));
      emit(reports);
    } else if (*disc) {
      const tr::WeightFn a = tr::read_weight_file(disc_g);
      const tr::WeightFn b = tr::read_weight_file(disc_h);
      if (!(a.group() == b.group())) {
        throw tr::PreconditionError("g and gtilde live on different groups");
      }
      const tr::DiscrepancyReport report = tr::discrepancy_search(
          a, b, form_for(a.group(), disc_j), disc_restarts, g.seed);
      emit(tr::to_json(report, !disc_no_witness));
    } else if (*box) {
      const tr::WeightFn nu = tr::read_weight_file(box_nu);
      emit(tr::to_json(tr::box_norm_bound(nu, form_for(nu.group(), box_j), box_budget,
                                          box_samples, g.seed)));
    } else if (*model) {
      const tr::WeightFn f = tr::read_weight_file(model_f);
      const tr::WeightFn nu = tr::read_weight_file(model_nu);
      if (!(f.group() == nu.group())) {
        throw tr::PreconditionError("f and nu live on different groups");
      }
      const fs::path out = in_out_dir(g, model_out);
      fs::path audit = out;
      audit.replace_extension(".audit.json");
      auto persist = [&](const tr::DenseModelResult& result) {
        if (out.has_parent_path()) fs::create_directories(out.parent_path());
        tr::write_weight_file(out, result.model, format);
        json doc = tr::to_json(result);
        write_text(audit, doc.dump(2) + "\n");
        emit(doc);
      };
      try {
        persist(tr::extract_dense_model(f, nu, tr::LinearForm(f.group(), 1), model_eps,
                                        model_restarts, model_iters, g.seed));
      } catch (const tr::NoConvergence& e) {
        persist(e.result());
        throw;
      }
    } else if (*count) {
      const tr::WeightFn f = tr::read_weight_file(count_f);
      emit(tr::to_json(tr::ap_density(f, count_k, tr::parse_ap_method(count_method))));
    } else if (*pipe) {
      tr::PipelineConfig cfg;
      if (!pipe_config.empty()) {
        std::ifstream in(pipe_config);
        if (!in) throw tr::PreconditionError("cannot read " + pipe_config);
        json doc;
        try {
          in >> doc;
        } catch (const json::exception& e) {
          throw tr::PreconditionError(std::string("malformed config: ") + e.what());
        }
        cfg = tr::pipeline_config_from_json(doc);
      }
      if (o_n->count()) cfg.N = over.N;
      if (o_k->count()) cfg.k = over.k;
      if (o_gen->count()) cfg.generator = over.generator;
      if (o_p->count()) cfg.p = over.p;
      if (o_delta->count()) cfg.delta = over.delta;
      if (o_eps->count()) cfg.epsilon = over.epsilon;
      if (o_samples->count()) cfg.samples = over.samples;
      if (o_patterns->count()) cfg.patterns = over.patterns;
      if (o_restarts->count()) cfg.restarts = over.restarts;
      if (o_iters->count()) cfg.max_iters = over.max_iters;
      if (o_lfc->count()) cfg.lfc_mode = over.lfc_mode;
      if (app.get_option("--seed")->count()) cfg.seed = g.seed;
      if (app.get_option("--out-dir")->count()) cfg.output_dir = g.out_dir;
      if (app.get_option("--format")->count()) cfg.format = g.format;
      emit(tr::to_json(tr::run_pipeline(cfg)));
    } else {
      std::cout << "transference " << kVersion << '\n';
    }
  } catch (const tr::PreconditionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const tr::StageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
