// seamkit command-line front end: one subcommand per pipeline stage.

#include <CLI11.hpp>

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "seamkit/seamkit.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace seamkit;

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kIo = 2, kNumeric = 3 };

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Io: return kIo;
    case ErrorKind::Numeric:
    case ErrorKind::Generation:
    case ErrorKind::Precondition: return kNumeric;
    case ErrorKind::Shape:
    case ErrorKind::Config: return kUsage;
  }
  return kUsage;
}

int report_error(int code, const std::string& message, const std::string& context) {
  std::cerr << json{{"code", code}, {"message", message}, {"context", context}}.dump() << std::endl;
  return code;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open JSON file", path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw IoError(std::string("corrupt JSON file: ") + e.what(), path);
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write file", path);
  out << text;
  if (!out) throw IoError("write failed", path);
}

void require_flag(const std::string& value, const char* flag) {
  if (value.empty()) throw ConfigError(std::string("missing required flag ") + flag);
}

/// Applies "--set /json/pointer=value" overrides onto a JSON document.
void apply_overrides(json& doc, const std::vector<std::string>& sets) {
  for (const auto& s : sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || s.empty() || s[0] != '/')
      throw ConfigError("override must look like /path/to/key=value", s);
    json value;
    try {
      value = json::parse(s.substr(eq + 1));
    } catch (const json::exception&) {
      value = s.substr(eq + 1);
    }
    const json::json_pointer ptr(s.substr(0, eq));
    if (!doc.contains(ptr)) throw ConfigError("override names an unknown field", s);
    doc[ptr] = value;
  }
}

/// Runs fn(i) for i in [0, n) on `jobs` threads. Items are independent; the
/// error of the lowest failing index is rethrown.
template <class Fn>
void parallel_for(std::size_t n, int jobs, Fn fn) {
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int workers = std::max(1, std::min<int>(jobs, static_cast<int>(n)));
  std::vector<std::thread> pool;
  for (int t = 1; t < workers; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

struct Common {
  std::uint64_t seed = 0;
  int jobs = 1;
  std::string manifest;
  std::string dir;
};

struct Manifest {
  fs::path base;
  json entries;

  std::size_t size() const { return entries.size(); }

  std::string path(std::size_t i, const char* key) const {
    const auto& e = entries.at(i);
    if (!e.contains(key)) throw ConfigError(std::string("manifest entry lacks \"") + key + "\"", std::to_string(i));
    const fs::path p = e.at(key).get<std::string>();
    return (p.is_absolute() ? p : base / p).string();
  }

  std::string optional_path(std::size_t i, const char* key) const {
    return entries.at(i).contains(key) ? path(i, key) : std::string{};
  }
};

Manifest load_manifest(const Common& common) {
  Manifest m;
  m.entries = read_json_file(common.manifest);
  if (m.entries.is_object() && m.entries.contains("items")) m.entries = m.entries["items"];
  if (!m.entries.is_array()) throw IoError("manifest must be a JSON array", common.manifest);
  m.base = common.dir.empty() ? fs::path(common.manifest).parent_path() : fs::path(common.dir);
  return m;
}

std::string item_name(std::size_t i) {
  std::ostringstream os;
  os << "item_" << std::setw(4) << std::setfill('0') << i;
  return os.str();
}

fs::path batch_out_dir(const std::string& out) {
  require_flag(out, "--out");
  fs::create_directories(out);
  return out;
}

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--seed", c.seed, "Random seed; item i of a batch uses stream i")->capture_default_str();
  sub->add_option("--jobs", c.jobs, "Worker threads for batch mode")->capture_default_str()->check(CLI::PositiveNumber);
  sub->add_option("--manifest", c.manifest, "Batch mode: JSON array of per-item paths");
  sub->add_option("--dir", c.dir, "Base directory for manifest paths (default: manifest's directory)");
}

// ---------------------------------------------------------------- mask-gen

struct MaskGenOpts {
  Common common;
  int height = 256;
  int width = 256;
  std::string out;
  MaskGenParams params;
};

void run_mask_gen(const MaskGenOpts& o) {
  if (o.common.manifest.empty()) {
    require_flag(o.out, "--out");
    Rng rng(o.common.seed, 0);
    save_mask(o.out, generate_mask(o.height, o.width, o.params, rng));
    return;
  }
  const Manifest m = load_manifest(o.common);
  const fs::path dir = batch_out_dir(o.out);
  parallel_for(m.size(), o.common.jobs, [&](std::size_t i) {
    const int h = m.entries[i].value("height", o.height);
    const int w = m.entries[i].value("width", o.width);
    Rng rng(o.common.seed, i);
    save_mask((dir / (item_name(i) + "_mask.png")).string(), generate_mask(h, w, o.params, rng));
  });
}

// ---------------------------------------------------------------- simulate

struct SimulateOpts {
  Common common;
  std::string in, mask, config, out, out_gt, out_mask, sidecar, codec_file;
  std::vector<std::string> sets;
  int quality = 0;
};

SimConfig load_sim_config(const std::string& path, const std::vector<std::string>& sets, int quality) {
  // overlay the file on the defaults so every known field can be overridden
  json doc = SimConfig{};
  if (!path.empty()) doc.merge_patch(read_json_file(path));
  apply_overrides(doc, sets);
  if (quality != 0) doc["jpeg_quality"] = {quality, quality};
  try {
    return doc.get<SimConfig>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid SimConfig: ") + e.what(), path);
  }
}

void simulate_one(const SimulateOpts& o, const SimConfig& cfg, const std::string& in, const std::string& mask_path,
                  const std::string& codec_file, const std::string& out, const std::string& out_gt,
                  const std::string& out_mask, const std::string& sidecar, std::uint64_t stream) {
  const Image clean = load_image(in);
  Rng rng(o.common.seed, stream);
  Mask mask;
  bool generated = false;
  if (mask_path.empty()) {
    Rng mask_rng = rng.child(0x6d61736bULL);
    mask = generate_mask(clean.height(), clean.width(), MaskGenParams{}, mask_rng);
    generated = true;
  } else {
    mask = load_mask(mask_path);
  }
  std::optional<Image> external;
  if (!codec_file.empty()) external = load_image(codec_file);
  const SimPair pair = simulate(clean, mask, cfg, rng, external);
  save_image(out, pair.degraded);
  save_image(out_gt, pair.target);
  save_mask(out_mask, pair.mask);
  json side = pair.params;
  side["seed"] = o.common.seed;
  side["stream"] = stream;
  side["generated_mask"] = generated;
  side["guard_radius"] = cfg.guard_radius();
  write_text_file(sidecar, side.dump(2) + "\n");
}

void run_simulate(const SimulateOpts& o) {
  const SimConfig cfg = load_sim_config(o.config, o.sets, o.quality);
  if (o.common.manifest.empty()) {
    require_flag(o.in, "--in");
    require_flag(o.out, "--out");
    const fs::path out(o.out);
    const std::string stem = (out.parent_path() / out.stem()).string();
    simulate_one(o, cfg, o.in, o.mask, o.codec_file, o.out, o.out_gt.empty() ? stem + "_gt.png" : o.out_gt,
                 o.out_mask.empty() ? stem + "_mask.png" : o.out_mask,
                 o.sidecar.empty() ? stem + ".json" : o.sidecar, 0);
    return;
  }
  const Manifest m = load_manifest(o.common);
  const fs::path dir = batch_out_dir(o.out);
  parallel_for(m.size(), o.common.jobs, [&](std::size_t i) {
    const std::string base = (dir / item_name(i)).string();
    simulate_one(o, cfg, m.path(i, "image"), m.optional_path(i, "mask"), m.optional_path(i, "codec"),
                 base + "_degraded.png", base + "_target.png", base + "_mask.png", base + ".json", i);
  });
}

// ---------------------------------------------------------------- refine / pool

struct RefineOpts {
  Common common;
  std::string in, mask, out;
  ClassicalRefineParams params;
};

void run_refine(const RefineOpts& o) {
  auto one = [&](const std::string& in, const std::string& mask, const std::string& out) {
    save_image(out, classical_refine(load_image(in), load_mask(mask), o.params));
  };
  if (o.common.manifest.empty()) {
    require_flag(o.in, "--in");
    require_flag(o.mask, "--mask");
    require_flag(o.out, "--out");
    one(o.in, o.mask, o.out);
    return;
  }
  const Manifest m = load_manifest(o.common);
  const fs::path dir = batch_out_dir(o.out);
  parallel_for(m.size(), o.common.jobs, [&](std::size_t i) {
    one(m.path(i, "image"), m.path(i, "mask"), (dir / (item_name(i) + "_refined.png")).string());
  });
}

struct PoolOpts {
  RefineOpts refine;
  int n = 8;
  bool no_original = false;
  std::string config;
  std::vector<std::string> sets;
  std::string refiner_cmd;
  std::string scores_out;
};

void run_pool(const PoolOpts& o) {
  const SimConfig cfg = load_sim_config(o.config, o.sets, 0);
  PoolParams pp;
  pp.variants = o.n;
  pp.include_original = !o.no_original;
  pp.jitter = cfg.color_shift.jitter;
  const Common& common = o.refine.common;

  auto make_refiner = [&](const fs::path& scratch) {
    return o.refiner_cmd.empty() ? make_classical_refiner(o.refine.params)
                                 : make_subprocess_refiner(o.refiner_cmd, scratch);
  };
  auto one = [&](const std::string& in, const std::string& mask, const std::string& out, std::uint64_t stream) {
    Rng rng(common.seed, stream);
    const fs::path scratch = fs::path(out).parent_path() / (fs::path(out).stem().string() + "_scratch");
    const PoolResult r = pool_refine_detailed(make_refiner(scratch), load_image(in), load_mask(mask), pp, rng);
    save_image(out, r.output);
    if (!o.refiner_cmd.empty()) fs::remove_all(scratch);
    return json{{"selected", r.selected}, {"scores", r.scores}};
  };
  if (common.manifest.empty()) {
    require_flag(o.refine.in, "--in");
    require_flag(o.refine.mask, "--mask");
    require_flag(o.refine.out, "--out");
    const json info = one(o.refine.in, o.refine.mask, o.refine.out, 0);
    if (!o.scores_out.empty()) write_text_file(o.scores_out, info.dump(2) + "\n");
    return;
  }
  const Manifest m = load_manifest(common);
  const fs::path dir = batch_out_dir(o.refine.out);
  std::vector<json> infos(m.size());
  parallel_for(m.size(), common.jobs, [&](std::size_t i) {
    infos[i] = one(m.path(i, "image"), m.path(i, "mask"), (dir / (item_name(i) + "_pooled.png")).string(), i);
  });
  if (!o.scores_out.empty()) write_text_file(o.scores_out, json(infos).dump(2) + "\n");
}

// ---------------------------------------------------------------- blend

struct BlendOpts {
  Common common;
  std::string src, dst, mask, gt, out;
  bool oracle_gradients = false;
  bool gauss_seidel = false;
  SolverParams solver;
};

void run_blend(const BlendOpts& o) {
  SolverParams sp = o.solver;
  if (o.gauss_seidel) sp.method = SolverMethod::GaussSeidel;
  auto one = [&](const std::string& src, const std::string& dst, const std::string& mask, const std::string& gt,
                 const std::string& out) {
    const std::string guide = o.oracle_gradients ? gt : src;
    if (o.oracle_gradients) require_flag(gt, "--gt (required by --oracle-gradients)");
    else require_flag(src, "--src");
    save_image(out, poisson_blend(load_image(guide), load_image(dst), load_mask(mask), sp));
  };
  if (o.common.manifest.empty()) {
    require_flag(o.dst, "--dst");
    require_flag(o.mask, "--mask");
    require_flag(o.out, "--out");
    one(o.src, o.dst, o.mask, o.gt, o.out);
    return;
  }
  const Manifest m = load_manifest(o.common);
  const fs::path dir = batch_out_dir(o.out);
  parallel_for(m.size(), o.common.jobs, [&](std::size_t i) {
    one(m.optional_path(i, "src"), m.path(i, "dst"), m.path(i, "mask"), m.optional_path(i, "gt"),
        (dir / (item_name(i) + "_blend.png")).string());
  });
}

// ---------------------------------------------------------------- tonemap

struct AmplifyOpts {
  int degree = 5;
  double beta_min = 20.0;
  double beta_max = 40.0;
  int samples = 4096;

  AmplifyParams params() const {
    AmplifyParams p{beta_min, beta_max, samples, degree};
    p.validate();
    return p;
  }
};

void add_amplify(CLI::App* sub, AmplifyOpts& a) {
  sub->add_option("--degree", a.degree, "Tone-map polynomial degree")->capture_default_str();
  sub->add_option("--beta-min", a.beta_min, "Lower bound of the amplification factor")->capture_default_str();
  sub->add_option("--beta-max", a.beta_max, "Upper bound of the amplification factor")->capture_default_str();
  sub->add_option("--samples", a.samples, "Balanced samples per mask side")->capture_default_str();
}

struct TonemapFitOpts {
  Common common;
  std::string pred, gt, mask, out;
  AmplifyOpts amplify;
};

void run_tonemap_fit(const TonemapFitOpts& o) {
  const AmplifyParams ap = o.amplify.params();
  auto one = [&](const std::string& pred, const std::string& gt, const std::string& mask, const std::string& out,
                 std::uint64_t stream) {
    Rng rng(o.common.seed, stream);
    const ToneMapFit fit = fit_tonemap_detailed(load_image(pred), load_image(gt), load_mask(mask), ap, rng);
    json j = fit.tone_map;
    j["beta"] = fit.beta;
    write_text_file(out, j.dump(2) + "\n");
  };
  if (o.common.manifest.empty()) {
    require_flag(o.pred, "--pred");
    require_flag(o.gt, "--gt");
    require_flag(o.mask, "--mask");
    require_flag(o.out, "--out");
    one(o.pred, o.gt, o.mask, o.out, 0);
    return;
  }
  const Manifest m = load_manifest(o.common);
  const fs::path dir = batch_out_dir(o.out);
  parallel_for(m.size(), o.common.jobs, [&](std::size_t i) {
    one(m.path(i, "pred"), m.path(i, "gt"), m.path(i, "mask"), (dir / (item_name(i) + "_tonemap.json")).string(), i);
  });
}

struct TonemapApplyOpts {
  Common common;
  std::string in, tonemap, out;
};

void run_tonemap_apply(const TonemapApplyOpts& o) {
  require_flag(o.tonemap, "--tonemap");
  ToneMap tm;
  try {
    tm = read_json_file(o.tonemap).get<ToneMap>();
  } catch (const json::exception& e) {
    throw IoError(std::string("invalid tone map JSON: ") + e.what(), o.tonemap);
  }
  if (o.common.manifest.empty()) {
    require_flag(o.in, "--in");
    require_flag(o.out, "--out");
    save_image(o.out, apply_tonemap(tm, load_image(o.in)));
    return;
  }
  const Manifest m = load_manifest(o.common);
  const fs::path dir = batch_out_dir(o.out);
  parallel_for(m.size(), o.common.jobs, [&](std::size_t i) {
    save_image((dir / (item_name(i) + "_mapped.png")).string(), apply_tonemap(tm, load_image(m.path(i, "image"))));
  });
}

// ---------------------------------------------------------------- eval

struct EvalOpts {
  Common common;
  std::string pred, gt, mask, out, csv;
  AmplifyOpts amplify;
};

void run_eval(const EvalOpts& o) {
  const AmplifyParams ap = o.amplify.params();
  auto one = [&](const std::string& pred, const std::string& gt, const std::string& mask, std::uint64_t stream) {
    Rng rng(o.common.seed, stream);
    MetricsReport r = evaluate(load_image(pred), load_image(gt), load_mask(mask), ap, rng);
    r.pred_id = pred;
    r.gt_id = gt;
    r.mask_id = mask;
    return r;
  };
  std::vector<MetricsReport> reports;
  json doc;
  if (o.common.manifest.empty()) {
    require_flag(o.pred, "--pred");
    require_flag(o.gt, "--gt");
    require_flag(o.mask, "--mask");
    reports.push_back(one(o.pred, o.gt, o.mask, 0));
    doc = to_json(reports.front());
  } else {
    const Manifest m = load_manifest(o.common);
    reports.resize(m.size());
    parallel_for(m.size(), o.common.jobs,
                 [&](std::size_t i) { reports[i] = one(m.path(i, "pred"), m.path(i, "gt"), m.path(i, "mask"), i); });
    doc = json::array();
    for (const auto& r : reports) doc.push_back(to_json(r));
  }
  const std::string text = doc.dump(2) + "\n";
  std::cout << text;
  if (!o.out.empty()) write_text_file(o.out, text);
  if (!o.csv.empty()) write_text_file(o.csv, csv_summary(reports));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"seamkit: seam-artifact simulation, discriminative tone mapping, refinement and evaluation"};
  app.require_subcommand(1, 1);

  MaskGenOpts mg;
  auto* mask_gen = app.add_subcommand("mask-gen", "Generate a random free-form binary mask");
  add_common(mask_gen, mg.common);
  mask_gen->add_option("--height", mg.height, "Mask height")->capture_default_str();
  mask_gen->add_option("--width", mg.width, "Mask width")->capture_default_str();
  mask_gen->add_option("--out", mg.out, "Output mask PNG (directory in batch mode)");
  mask_gen->add_option("--coverage-min", mg.params.coverage.lo, "Minimum covered fraction")->capture_default_str();
  mask_gen->add_option("--coverage-max", mg.params.coverage.hi, "Maximum covered fraction")->capture_default_str();
  mask_gen->add_option("--strokes-max", mg.params.strokes.hi, "Maximum brush strokes")->capture_default_str();
  mask_gen->add_option("--rects-max", mg.params.rectangles.hi, "Maximum rectangles")->capture_default_str();
  mask_gen->add_option("--max-retries", mg.params.max_retries, "Redraws before giving up")->capture_default_str();

  SimulateOpts so;
  auto* sim = app.add_subcommand("simulate", "Synthesize a degraded/target pair from a clean image");
  add_common(sim, so.common);
  sim->add_option("--in", so.in, "Clean input PNG");
  sim->add_option("--mask", so.mask, "Binary edit mask PNG (generated from the seed when omitted)");
  sim->add_option("--config", so.config, "SimConfig JSON (defaults when omitted)");
  sim->add_option("--set", so.sets, "Override a config field: /json/pointer=value (repeatable)");
  sim->add_option("--quality", so.quality, "Pin the JPEG quality (0 = sample from config)")->capture_default_str();
  sim->add_option("--codec-file", so.codec_file, "Precomputed reconstruction used for codec artifacts");
  sim->add_option("--out", so.out, "Degraded PNG (directory in batch mode)");
  sim->add_option("--out-gt", so.out_gt, "Target PNG (default <out>_gt.png)");
  sim->add_option("--out-mask", so.out_mask, "Emitted mask PNG (default <out>_mask.png)");
  sim->add_option("--sidecar", so.sidecar, "JSON sidecar (default <out>.json)");

  RefineOpts ro;
  auto add_refine_knobs = [](CLI::App* sub, RefineOpts& r) {
    add_common(sub, r.common);
    sub->add_option("--in", r.in, "Input PNG (x_gen)");
    sub->add_option("--mask", r.mask, "Binary mask PNG");
    sub->add_option("--out", r.out, "Output PNG (directory in batch mode)");
    sub->add_option("--degree", r.params.degree, "Polynomial degree of the ring matching")->capture_default_str();
    sub->add_option("--ring-width", r.params.ring_width, "Ring width in pixels")->capture_default_str();
    sub->add_option("--feather-sigma", r.params.feather_sigma, "Feathering sigma in pixels")->capture_default_str();
    sub->add_option("--quantiles", r.params.quantiles, "Matched quantile count")->capture_default_str();
  };
  auto* refine = app.add_subcommand("refine", "Classical ring-matching refinement of the masked region");
  add_refine_knobs(refine, ro);

  PoolOpts po;
  auto* pool = app.add_subcommand("pool", "Inference-time pooling over jittered variants");
  add_refine_knobs(pool, po.refine);
  pool->add_option("--n", po.n, "Number of variants")->capture_default_str()->check(CLI::PositiveNumber);
  pool->add_flag("--no-original", po.no_original, "Jitter every variant, including the first");
  pool->add_option("--config", po.config, "SimConfig JSON supplying the jitter ranges");
  pool->add_option("--set", po.sets, "Override a config field: /json/pointer=value (repeatable)");
  pool->add_option("--refiner-cmd", po.refiner_cmd,
                   "External refiner command with {in}, {mask}, {out} placeholders (default: classical)");
  pool->add_option("--scores", po.scores_out, "Write per-variant scores and the selection as JSON");

  BlendOpts bo;
  auto* blend = app.add_subcommand("blend", "Poisson (gradient-domain) blending baseline");
  add_common(blend, bo.common);
  blend->add_option("--src", bo.src, "Source PNG supplying the guidance gradients");
  blend->add_option("--dst", bo.dst, "Destination PNG supplying the boundary");
  blend->add_option("--mask", bo.mask, "Binary mask PNG of the blended region");
  blend->add_option("--gt", bo.gt, "Ground-truth PNG (used only with --oracle-gradients)");
  blend->add_option("--out", bo.out, "Output PNG (directory in batch mode)");
  blend->add_option("--tol", bo.solver.tolerance, "Relative residual tolerance")->capture_default_str();
  blend->add_option("--max-iter", bo.solver.max_iterations, "Iteration cap")->capture_default_str();
  blend->add_flag("--oracle-gradients", bo.oracle_gradients, "Take guidance gradients from --gt instead of --src");
  blend->add_flag("--gauss-seidel", bo.gauss_seidel, "Use Gauss-Seidel instead of conjugate gradient");

  TonemapFitOpts tf;
  auto* tfit = app.add_subcommand("tonemap-fit", "Fit the discriminative tone map and write it as JSON");
  add_common(tfit, tf.common);
  tfit->add_option("--pred", tf.pred, "Prediction PNG");
  tfit->add_option("--gt", tf.gt, "Ground-truth PNG");
  tfit->add_option("--mask", tf.mask, "Binary mask PNG");
  tfit->add_option("--out", tf.out, "Output tone-map JSON (directory in batch mode)");
  add_amplify(tfit, tf.amplify);

  TonemapApplyOpts ta;
  auto* tapply = app.add_subcommand("tonemap-apply", "Apply a tone-map JSON to an image");
  add_common(tapply, ta.common);
  tapply->add_option("--in", ta.in, "Input PNG");
  tapply->add_option("--tonemap", ta.tonemap, "Tone-map JSON from tonemap-fit");
  tapply->add_option("--out", ta.out, "Output PNG (directory in batch mode)");

  EvalOpts eo;
  auto* ev = app.add_subcommand("eval", "Print L1, masked L1, PSNR and discriminative L1 as JSON");
  add_common(ev, eo.common);
  ev->add_option("--pred", eo.pred, "Prediction PNG");
  ev->add_option("--gt", eo.gt, "Ground-truth PNG");
  ev->add_option("--mask", eo.mask, "Binary mask PNG");
  ev->add_option("--out", eo.out, "Also write the JSON report to this file");
  ev->add_option("--csv", eo.csv, "Write a CSV summary of per-metric means");
  add_amplify(ev, eo.amplify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    return report_error(kUsage, e.what(), "argv");
  }

  try {
    if (mask_gen->parsed()) run_mask_gen(mg);
    else if (sim->parsed()) run_simulate(so);
    else if (refine->parsed()) run_refine(ro);
    else if (pool->parsed()) run_pool(po);
    else if (blend->parsed()) run_blend(bo);
    else if (tfit->parsed()) run_tonemap_fit(tf);
    else if (tapply->parsed()) run_tonemap_apply(ta);
    else if (ev->parsed()) run_eval(eo);
  } catch (const Error& e) {
    return report_error(exit_code_for(e.kind()), e.what(), e.context());
  } catch (const fs::filesystem_error& e) {
    return report_error(kIo, e.what(), e.path1().string());
  } catch (const std::exception& e) {
    return report_error(kUsage, e.what(), "");
  }
  return kOk;
}
