#include "picheck/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <functional>
#include <random>
#include <stdexcept>
#include <thread>

#include "picheck/candidates.hpp"
#include "picheck/euclid_oracle.hpp"
#include "picheck/modulus.hpp"
#include "picheck/netflow.hpp"
#include "picheck/plots.hpp"
#include "picheck/region_spec.hpp"
#include "picheck/riesz.hpp"
#include "picheck/separating.hpp"

namespace picheck {

namespace {

using report::Json;
using report::Record;

std::uint64_t substream(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t h = seed ^ (0x9E3779B97F4A7C15ull + index);
  h ^= h >> 30;
  h *= 0xBF58476D1CE4E5B9ull;
  h ^= h >> 27;
  h *= 0x94D049BB133111EBull;
  h ^= h >> 31;
  return h;
}

Json pole_params(const PointCloudSpace& space, VertexId x, VertexId y) {
  Json j;
  j["x"] = x;
  j["y"] = y;
  j["d_xy"] = report::number(space.distance(x, y));
  return j;
}

// Per-pole-pair shared state; immutable once built, safe across tasks.
struct Instance {
  VertexId x = 0;
  VertexId y = 0;
  PoleContext ctx;
};

struct RunState {
  const ExperimentConfig& cfg;
  const PointCloudSpace& space;
  const std::vector<Instance>& instances;
  double doubling = 0.0;        // 0 when not needed by any command
  double quasiconvexity = 1.0;
  std::uint64_t seed = 0;
};

RegionSet bisector_region(const PointCloudSpace& space, const PoleContext& ctx) {
  RegionSet r;
  r.mask.assign(space.vertex_count(), 0);
  for (VertexId v = 0; v < space.vertex_count(); ++v)
    r.mask[v] = ctx.from_x[v] <= ctx.from_y[v];
  r.label = "bisector";
  return r;
}

// Region specs named in the config, or the distance bisector when none are
// given so region commands always have a subject.
std::vector<RegionSet> config_regions(const RunState& st, const Instance& inst) {
  if (st.cfg.regions.empty()) return {bisector_region(st.space, inst.ctx)};
  RegionSpecContext rctx;
  rctx.field_resolver = [&](const std::string& id) -> std::vector<double> {
    if (id == "dist_x") return inst.ctx.from_x.values();
    if (id == "dist_y") return inst.ctx.from_y.values();
    if (id == "riesz") return inst.ctx.measure.weight;
    throw std::invalid_argument("unknown field '" + id + "'");
  };
  std::vector<RegionSet> out;
  for (const std::string& spec : st.cfg.regions)
    out.push_back(parse_region(st.space, spec, rctx));
  return out;
}

double tolerance_or(const ExperimentConfig& cfg, const char* key, double dflt) {
  if (const auto it = cfg.tolerances.find(key); it != cfg.tolerances.end())
    return it->get<double>();
  return dflt;
}

// --- command handlers --------------------------------------------------------

void run_riesz(const RunState& st, const Instance& inst, Record& rec) {
  const RieszMeasure& m = inst.ctx.measure;
  const double bound = 8.0 * st.doubling * m.truncation * m.pole_distance;
  std::size_t support = 0;
  for (double w : m.weight) support += w > 0.0;
  rec.outputs["total_mass"] = report::number(m.total_mass);
  rec.outputs["mass_bound"] = report::number(bound);
  rec.outputs["mass_ratio"] = report::number(m.total_mass / bound);
  rec.outputs["doubling"] = report::number(st.doubling);
  rec.outputs["support_radius"] = report::number(m.support_radius);
  rec.outputs["support_vertices"] = support;
  rec.pass = m.total_mass <= bound * (1.0 + 1e-12);
}

void run_mincut(const RunState& st, const Instance& inst, Record& rec) {
  const auto [net, arcs] =
      build_net_graph(st.space, inst.x, inst.y, st.cfg.delta, st.cfg.L);
  const Flow flow = max_flow(net, arcs);
  const Cut cut = min_cut(net, arcs);
  const double gap =
      std::abs(flow.value - cut.value) / std::max(1.0, std::abs(flow.value));
  rec.outputs["net_points"] = net.points.size();
  rec.outputs["arcs"] = arcs.size();
  rec.outputs["flow"] = report::number(flow.value);
  rec.outputs["cut"] = report::number(cut.value);
  rec.outputs["duality_gap_rel"] = report::number(gap);
  rec.outputs["scale_flagged"] = net.scale_flagged;
  rec.pass = gap <= tolerance_or(st.cfg, "mincut_gap", 1e-9);
}

void run_pencil(const RunState& st, const Instance& inst, Record& rec,
                std::uint64_t rng_seed) {
  const auto [net, arcs] =
      build_net_graph(st.space, inst.x, inst.y, st.cfg.delta, st.cfg.L);
  const Flow flow = max_flow(net, arcs);
  const DiscretePencil pencil = flow_to_pencil(net, arcs, flow);
  const double c1 =
      pencil_constant(st.space, net, arcs, pencil, inst.ctx.measure);

  double weight_sum = 0.0;
  for (const PencilPath& p : pencil.paths) weight_sum += p.weight;

  std::mt19937_64 rng(rng_seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  double max_random_ratio = 0.0;
  const std::size_t draws = 20;
  std::vector<double> g(st.space.vertex_count());
  for (std::size_t k = 0; k < draws; ++k) {
    for (double& v : g) v = uni(rng);
    const PencilRatio pr = pencil_inequality_ratio(st.space, net, arcs, pencil,
                                                   g, inst.ctx.measure);
    max_random_ratio = std::max(max_random_ratio, pr.ratio);
  }

  rec.outputs["paths"] = pencil.paths.size();
  rec.outputs["flow"] = report::number(pencil.flow_value);
  rec.outputs["weight_sum"] = report::number(weight_sum);
  rec.outputs["pencil_constant"] = report::number(c1);
  rec.outputs["max_random_ratio"] = report::number(max_random_ratio);
  const bool weights_ok =
      pencil.paths.empty() || std::abs(weight_sum - 1.0) <= 1e-9;
  rec.pass = weights_ok && max_random_ratio <= c1 * (1.0 + 1e-9) + 1e-12;
}

void run_modulus(const RunState& st, const Instance& inst, Record& rec) {
  const KeithBound kb = keith_bound(st.space, inst.x, inst.y, st.cfg.L,
                                    st.cfg.k_paths, inst.ctx.measure);
  Json ks = Json::array();
  Json moduli = Json::array();
  bool monotone = true;
  for (std::size_t i = 0; i < kb.ks.size(); ++i) {
    ks.push_back(kb.ks[i]);
    moduli.push_back(report::number(kb.moduli[i]));
    if (i > 0 && kb.moduli[i] < kb.moduli[i - 1] - 1e-12) monotone = false;
  }
  rec.outputs["ks"] = std::move(ks);
  rec.outputs["moduli"] = std::move(moduli);
  rec.outputs["value"] = report::number(kb.value);
  rec.outputs["subfamily_estimate"] = kb.subfamily_estimate;
  rec.outputs["monotone"] = monotone;
  rec.pass = monotone;
}

void run_width(const RunState& st, const Instance& inst, const RegionSet& region,
               Record& rec) {
  const double w_all = width(st.space, inst.x, inst.y, region);
  const double w_quasi =
      width_quasigeodesic(st.space, inst.x, inst.y, region, st.cfg.L);
  rec.params["region"] = region.label;
  rec.outputs["width_all_paths"] = report::number(w_all);
  rec.outputs["width_quasigeodesic"] = report::number(w_quasi);
  rec.outputs["region_vertices"] = region.count();
  rec.pass = w_all <= w_quasi * (1.0 + 1e-12) + 1e-15;
}

void run_sr_scan(const RunState& st, const Instance& inst, Record& rec) {
  CandidateSuite suite = standard_candidates(st.space, inst.ctx, st.cfg.candidates);
  for (RegionSet& extra : config_regions(st, inst))
    if (!st.cfg.regions.empty()) suite.regions.push_back(std::move(extra));
  const ScanResult scan = set_connectedness_scan(st.space, inst.ctx, suite.regions);

  std::vector<std::size_t> order(scan.values.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (scan.values[a] != scan.values[b]) return scan.values[a] < scan.values[b];
    return a < b;
  });
  Json lowest = Json::array();
  for (std::size_t i = 0; i < order.size() && i < 5; ++i) {
    lowest.push_back({{"label", suite.regions[order[i]].label},
                      {"ratio", report::number(scan.values[order[i]])}});
  }
  rec.outputs["candidates"] = suite.regions.size();
  rec.outputs["best_ratio"] = report::number(scan.best);
  rec.outputs["argmin"] =
      scan.argmin == SIZE_MAX ? "" : suite.regions[scan.argmin].label;
  rec.outputs["lowest"] = std::move(lowest);
  // Informational: the scan reports the empirical infimum, it asserts nothing.
}

void run_pos_field(const RunState& st, const Instance& inst,
                   const RegionSet& region, Record& rec) {
  const PositionField pos = position_function(st.space, inst.x, inst.y, region);
  const LipBoundCheck lip =
      lip_bound_check(st.space, region, pos, st.quasiconvexity);
  rec.params["region"] = region.label;
  rec.outputs["width"] = report::number(pos.width);
  rec.outputs["pos_y_equals_width"] = pos.value[inst.y] == pos.width;
  rec.outputs["max_lip"] = report::number(lip.max_lip);
  rec.outputs["max_lip_outside"] = report::number(lip.max_lip_outside);
  rec.outputs["lip_bound"] = report::number(lip.bound);
  rec.pass = pos.value[inst.y] == pos.width && lip.within_bound;
}

void run_minkowski(const RunState& st, const Instance& inst,
                   const RegionSet& region, Record& rec) {
  const std::vector<double> radii = default_radius_schedule(
      st.space.resolution(), inst.ctx.pole_distance / 4.0);
  const ContentProfile prof =
      minkowski_content(st.space, region, inst.ctx.measure.weight, radii);
  Json jr = Json::array(), jv = Json::array(), js = Json::array();
  for (double r : prof.radii) jr.push_back(report::number(r));
  for (double v : prof.values) jv.push_back(report::number(v));
  for (auto s : prof.saturated) js.push_back(s != 0);
  rec.params["region"] = region.label;
  rec.outputs["radii"] = std::move(jr);
  rec.outputs["profile"] = std::move(jv);
  rec.outputs["saturated"] = std::move(js);
  rec.outputs["estimate"] = report::number(prof.estimate);
  rec.outputs["collar_estimate"] = report::number(prof.collar_estimate);
  rec.outputs["degenerate"] = prof.degenerate;
  rec.pass = prof.estimate >= 0.0;
}

void run_sandwich(const RunState& st, const Instance& inst, Record& rec) {
  const CandidateSuite suite =
      standard_candidates(st.space, inst.ctx, st.cfg.candidates);
  const double tol = tolerance_or(st.cfg, "sandwich", 0.2);
  const SandwichCheck sw =
      sandwich_check(st.space, inst.ctx, st.quasiconvexity, suite.regions,
                     suite.separators, tol);
  rec.outputs["lhs"] = report::number(sw.lhs);
  rec.outputs["mid"] = report::number(sw.mid);
  rec.outputs["rhs"] = report::number(sw.rhs);
  rec.outputs["tolerance"] = report::number(sw.tolerance);
  rec.outputs["regions"] = suite.regions.size();
  rec.outputs["separators"] = suite.separators.size();
  rec.outputs["separators_valid"] = sw.separators_valid;
  if (sw.region_argmin != SIZE_MAX)
    rec.outputs["region_argmin"] = suite.regions[sw.region_argmin].label;
  if (sw.separator_argmin != SIZE_MAX)
    rec.outputs["separator_argmin"] =
        suite.separators[sw.separator_argmin].omega.label;
  rec.pass = sw.pass;
}

void run_coarea(const RunState& st, const Instance& inst, const RegionSet& region,
                Record& rec) {
  const PositionField pos = position_function(st.space, inst.x, inst.y, region);
  const double tol = tolerance_or(st.cfg, "coarea", 0.15);
  const CoareaCheck ca = coarea_check(st.space, inst.ctx, pos, tol);
  rec.params["region"] = region.label;
  rec.outputs["level_integral"] = report::number(ca.level_integral);
  rec.outputs["slope_integral"] = report::number(ca.slope_integral);
  rec.outputs["margin"] = report::number(ca.margin);
  rec.outputs["tolerance"] = report::number(ca.tolerance);
  rec.pass = ca.pass;
}

void run_iso(const RunState& st, const Instance& inst, const RegionSet& region,
             Record& rec) {
  const double r =
      st.cfg.iso_r > 0.0 ? st.cfg.iso_r : inst.ctx.pole_distance / 2.0;
  const IsoperimetricCheck iso = relative_isoperimetric_check(
      st.space, region, inst.x, r, st.cfg.lambda);
  rec.params["region"] = region.label;
  rec.params["r"] = report::number(r);
  rec.params["lambda"] = report::number(st.cfg.lambda);
  rec.outputs["lhs"] = report::number(iso.lhs);
  rec.outputs["surface"] = report::number(iso.surface);
  rec.outputs["rhs_term"] = report::number(iso.rhs_term);
  rec.outputs["ratio"] = report::number(iso.ratio);
  rec.outputs["flagged"] = iso.flagged;
  // Informational: the ratio feeds the profile study, no threshold here.
}

void run_euclid_validate(const ExperimentConfig& cfg, std::uint64_t rng_seed,
                         Record& rec) {
  const double sphere_tol = tolerance_or(cfg, "sphere_energy", 1e-3);
  const double pairwise_tol = tolerance_or(cfg, "sphere_pairwise", 5e-3);
  const double grad_tol = tolerance_or(cfg, "gradient", 1e-5);

  double max_sphere_err = 0.0, max_pairwise = 0.0;
  Json spheres = Json::object();
  for (int d : {2, 3}) {
    std::vector<double> vals;
    Json row = Json::array();
    for (double r : {0.5, 1.0, 2.0}) {
      const oracle::QuadratureResult q = oracle::sphere_energy(d, r);
      vals.push_back(q.value);
      row.push_back(report::number(q.value));
      max_sphere_err = std::max(max_sphere_err, std::abs(q.value - d) / d);
    }
    for (std::size_t i = 0; i < vals.size(); ++i)
      for (std::size_t j = i + 1; j < vals.size(); ++j)
        max_pairwise = std::max(
            max_pairwise, std::abs(vals[i] - vals[j]) / std::abs(vals[i]));
    spheres["d" + std::to_string(d)] = std::move(row);
  }

  double max_grad_err = 0.0;
  bool any_step_flagged = false;
  for (int d : {2, 3}) {
    std::mt19937_64 rng(substream(rng_seed, static_cast<std::uint64_t>(d)));
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    for (int k = 0; k < 100; ++k) {
      oracle::Vec x(d), z(d);
      double dist = 0.0;
      do {
        for (int a = 0; a < d; ++a) {
          x[a] = uni(rng);
          z[a] = uni(rng);
        }
        dist = 0.0;
        for (int a = 0; a < d; ++a) dist += (x[a] - z[a]) * (x[a] - z[a]);
        dist = std::sqrt(dist);
      } while (dist < 0.3);
      const oracle::GradientCheck gc =
          oracle::gradient_identity_check(d, x, z, 1e-4);
      max_grad_err = std::max(max_grad_err, gc.relative_error);
      any_step_flagged = any_step_flagged || gc.step_flagged;
    }
  }

  const oracle::Vec x0{0.0, 0.0};
  const oracle::Vec y0{1.0, 0.0};
  Json deltas = Json::array();
  bool decreasing = true;
  double prev = kInf;
  for (double L : {1.0, 2.0, 4.0}) {
    const double dl = oracle::delta_L(2, x0, y0, L).value;
    deltas.push_back(report::number(dl));
    if (dl > prev * (1.0 + 1e-9)) decreasing = false;
    prev = dl;
  }

  bool halfspace_ok = true;
  Json halfspaces = Json::object();
  for (int d : {2, 3}) {
    oracle::Vec xa(d, 0.0), yb(d, 0.0);
    yb[0] = 1.0;
    const double e = oracle::halfspace_separator_energy(d, xa, yb, 4.0).value;
    halfspaces["d" + std::to_string(d)] = report::number(e);
    halfspace_ok = halfspace_ok && e >= d / 2.0;
  }

  const oracle::BallMass bm = oracle::riesz_ball_mass_analytic(2, 0.3, x0, y0);

  rec.outputs["sphere_energy"] = std::move(spheres);
  rec.outputs["max_sphere_rel_err"] = report::number(max_sphere_err);
  rec.outputs["max_sphere_pairwise"] = report::number(max_pairwise);
  rec.outputs["max_gradient_rel_err"] = report::number(max_grad_err);
  rec.outputs["gradient_step_flagged"] = any_step_flagged;
  rec.outputs["delta_L"] = std::move(deltas);
  rec.outputs["delta_L_decreasing"] = decreasing;
  rec.outputs["halfspace_energy"] = std::move(halfspaces);
  rec.outputs["ball_mass_x_term"] = report::number(bm.x_term);
  rec.outputs["ball_mass_total"] = report::number(bm.total);
  rec.pass = max_sphere_err <= sphere_tol && max_pairwise <= pairwise_tol &&
             max_grad_err <= grad_tol && !any_step_flagged && decreasing &&
             halfspace_ok && bm.total > bm.x_term && bm.x_term > 0.0;
}

void write_plots(const ExperimentConfig& cfg, const RunState& st,
                 const std::string& out_dir, Record& rec) {
  if (st.space.dim() < 2) {
    rec.outputs["files"] = Json::array();
    return;
  }
  Json files = Json::array();
  const Instance& inst = st.instances.front();
  {
    const std::string path = out_dir + "/riesz.svg";
    plots::write_text_file(
        plots::heatmap_svg(st.space, inst.ctx.measure.weight, "riesz weights"),
        path);
    files.push_back("riesz.svg");
  }
  {
    const PositionField pos = position_function(
        st.space, inst.x, inst.y, bisector_region(st.space, inst.ctx));
    const std::string path = out_dir + "/pos.svg";
    plots::write_text_file(plots::contour_svg(st.space, pos.value, "position"),
                           path);
    files.push_back("pos.svg");
  }
  if (std::find(cfg.commands.begin(), cfg.commands.end(), "mincut") !=
      cfg.commands.end()) {
    const auto [net, arcs] =
        build_net_graph(st.space, inst.x, inst.y, cfg.delta, cfg.L);
    const Cut cut = min_cut(net, arcs);
    const std::string path = out_dir + "/cut.svg";
    plots::write_text_file(plots::cut_svg(st.space, net, arcs, cut), path);
    files.push_back("cut.svg");
  }
  rec.outputs["files"] = std::move(files);
}

}  // namespace

report::Json run_experiment(const ExperimentConfig& cfg, const RunOptions& opts) {
  const std::uint64_t seed = opts.seed != 0 ? opts.seed : cfg.seed;
  const int jobs = std::max(1, opts.jobs != 0 ? opts.jobs : cfg.jobs);

  const PointCloudSpace space = build_space(cfg);

  std::vector<std::string> commands;
  for (const std::string& c : cfg.commands) {
    if (opts.only.empty() ||
        std::find(opts.only.begin(), opts.only.end(), c) != opts.only.end())
      commands.push_back(c);
  }

  // Pole pairs; a quarter/three-quarter split of the widest axis by default.
  std::vector<std::pair<VertexId, VertexId>> pole_ids;
  if (cfg.poles.empty()) {
    double lo = kInf, hi = -kInf;
    int axis = 0;
    for (int a = 0; a < space.dim(); ++a) {
      double alo = kInf, ahi = -kInf;
      for (VertexId v = 0; v < space.vertex_count(); ++v) {
        alo = std::min(alo, space.coords(v)[a]);
        ahi = std::max(ahi, space.coords(v)[a]);
      }
      if (ahi - alo > hi - lo) {
        axis = a;
        lo = alo;
        hi = ahi;
      }
    }
    std::vector<double> px(space.dim()), py(space.dim());
    for (int a = 0; a < space.dim(); ++a) {
      double alo = kInf, ahi = -kInf;
      for (VertexId v = 0; v < space.vertex_count(); ++v) {
        alo = std::min(alo, space.coords(v)[a]);
        ahi = std::max(ahi, space.coords(v)[a]);
      }
      const double mid = (alo + ahi) / 2.0;
      px[a] = a == axis ? alo + 0.25 * (ahi - alo) : mid;
      py[a] = a == axis ? alo + 0.75 * (ahi - alo) : mid;
    }
    pole_ids.emplace_back(nearest_vertex_to(space, px),
                          nearest_vertex_to(space, py));
  } else {
    for (const PolePairSpec& p : cfg.poles)
      pole_ids.push_back(resolve_poles(space, p));
  }

  std::vector<Instance> instances;
  instances.reserve(pole_ids.size());
  for (const auto& [x, y] : pole_ids)
    instances.push_back({x, y, make_pole_context(space, x, y, cfg.L)});

  RunState st{cfg, space, instances, 0.0, 1.0, seed};

  const bool needs_doubling =
      std::find(commands.begin(), commands.end(), "riesz") != commands.end();
  if (needs_doubling) st.doubling = doubling_estimate(space).value;

  const bool needs_quasi =
      std::find(commands.begin(), commands.end(), "pos-field") != commands.end() ||
      std::find(commands.begin(), commands.end(), "sandwich") != commands.end();
  if (needs_quasi) {
    if (space.metric_kind() == MetricKind::GraphPath) {
      st.quasiconvexity = 1.0;
    } else {
      std::vector<std::pair<VertexId, VertexId>> pairs;
      const std::size_t n = space.vertex_count();
      const std::size_t samples = std::min<std::size_t>(16, n / 2);
      for (std::size_t i = 0; i < samples; ++i) {
        const auto a = static_cast<VertexId>(i * (n - 1) / std::max<std::size_t>(
                                                               1, samples - 1));
        pairs.emplace_back(a, static_cast<VertexId>(n - 1 - a));
      }
      for (const auto& [x, y] : pole_ids) pairs.emplace_back(x, y);
      const QuasiconvexityEstimate q = quasiconvexity_estimate(space, pairs);
      st.quasiconvexity = q.finite ? q.value : kInf;
    }
  }

  // Build the task list; each task owns its record and captures any module
  // error instead of aborting the run.
  std::vector<std::function<Record()>> tasks;
  auto add_task = [&tasks](std::string op, Json params,
                           std::function<void(Record&)> body) {
    tasks.push_back([op = std::move(op), params = std::move(params),
                     body = std::move(body)]() {
      Record rec;
      rec.op = op;
      rec.params = std::move(params);
      try {
        body(rec);
      } catch (const std::exception& e) {
        rec.error = e.what();
      }
      return rec;
    });
  };

  for (const std::string& cmd : commands) {
    for (std::size_t pi = 0; pi < instances.size(); ++pi) {
      const Instance& inst = instances[pi];
      Json params = pole_params(space, inst.x, inst.y);
      params["L"] = report::number(cfg.L);
      const std::uint64_t rng_seed = substream(seed, tasks.size());

      if (cmd == "riesz") {
        add_task(cmd, params, [&st, &inst](Record& r) { run_riesz(st, inst, r); });
      } else if (cmd == "mincut") {
        params["delta"] = report::number(cfg.delta);
        add_task(cmd, params,
                 [&st, &inst](Record& r) { run_mincut(st, inst, r); });
      } else if (cmd == "pencil") {
        params["delta"] = report::number(cfg.delta);
        add_task(cmd, params, [&st, &inst, rng_seed](Record& r) {
          run_pencil(st, inst, r, rng_seed);
        });
      } else if (cmd == "modulus") {
        add_task(cmd, params,
                 [&st, &inst](Record& r) { run_modulus(st, inst, r); });
      } else if (cmd == "sr-scan") {
        add_task(cmd, params,
                 [&st, &inst](Record& r) { run_sr_scan(st, inst, r); });
      } else if (cmd == "sandwich") {
        add_task(cmd, params,
                 [&st, &inst](Record& r) { run_sandwich(st, inst, r); });
      } else if (cmd == "width" || cmd == "pos-field" || cmd == "minkowski" ||
                 cmd == "coarea" || cmd == "iso") {
        const std::size_t region_count =
            cfg.regions.empty() ? 1 : cfg.regions.size();
        for (std::size_t ri = 0; ri < region_count; ++ri) {
          Json rp = params;
          rp["region_index"] = ri;
          add_task(cmd, rp, [&st, &inst, cmd, ri](Record& r) {
            const std::vector<RegionSet> regions = config_regions(st, inst);
            const RegionSet& region = regions.at(ri);
            if (cmd == "width")
              run_width(st, inst, region, r);
            else if (cmd == "pos-field")
              run_pos_field(st, inst, region, r);
            else if (cmd == "minkowski")
              run_minkowski(st, inst, region, r);
            else if (cmd == "coarea")
              run_coarea(st, inst, region, r);
            else
              run_iso(st, inst, region, r);
          });
        }
      } else if (cmd == "euclid-validate") {
        if (pi == 0) {
          add_task(cmd, Json::object(), [&cfg, rng_seed](Record& r) {
            run_euclid_validate(cfg, rng_seed, r);
          });
        }
      } else {
        add_task(cmd, params, [cmd](Record&) {
          throw std::invalid_argument("unknown command '" + cmd + "'");
        });
      }
    }
  }

  std::vector<Record> records(tasks.size());
  if (jobs <= 1 || tasks.size() <= 1) {
    for (std::size_t i = 0; i < tasks.size(); ++i) records[i] = tasks[i]();
  } else {
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= tasks.size()) break;
        records[i] = tasks[i]();
      }
    };
    std::vector<std::thread> pool;
    const std::size_t count =
        std::min<std::size_t>(static_cast<std::size_t>(jobs), tasks.size());
    pool.reserve(count);
    for (std::size_t j = 0; j < count; ++j) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  if (!opts.out_dir.empty() && cfg.plots) {
    Record rec;
    rec.op = "plots";
    try {
      std::filesystem::create_directories(opts.out_dir);
      write_plots(cfg, st, opts.out_dir, rec);
    } catch (const std::exception& e) {
      rec.error = e.what();
    }
    records.push_back(std::move(rec));
  }

  report::Provenance prov;
  prov.space_hash = space_hash(space);
  prov.config_hash = config_hash(cfg);
  prov.seed = seed;
  prov.config_echo = cfg.raw;
  const Json rep = report::assemble(prov, records);

  if (!opts.out_dir.empty()) {
    std::filesystem::create_directories(opts.out_dir);
    report::write_json_file(rep, opts.out_dir + "/report.json");
    plots::write_text_file(report::render_tsv(rep), opts.out_dir + "/report.tsv");
  }
  return rep;
}

}  // namespace picheck
