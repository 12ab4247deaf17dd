#include "cli.hpp"

#include <CLI11.hpp>
#include <cstdlib>
#include <iomanip>
#include <optional>
#include <ostream>

#include "whkit/consistency.hpp"
#include "whkit/criterion.hpp"
#include "whkit/embedding.hpp"
#include "whkit/error.hpp"
#include "whkit/generators.hpp"
#include "whkit/geodesics.hpp"
#include "whkit/geometry.hpp"
#include "whkit/matching.hpp"
#include "whkit/matrix_io.hpp"
#include "whkit/parallel.hpp"

namespace whkit::cli {

namespace {

struct SurfaceInput {
  std::string mesh;
  std::string cloud;
  std::string boundary;
  std::size_t k = 15;

  void add_to(CLI::App& app) {
    auto* m = app.add_option("--mesh", mesh, "Triangle mesh (ASCII OFF)");
    auto* c = app.add_option("--cloud", cloud, "Point cloud (XYZ, one point per line)");
    m->excludes(c);
    app.add_option("--k", k, "Neighbours per point for --cloud")->capture_default_str()->check(CLI::PositiveNumber);
    app.add_option("--boundary", boundary,
                   "Boundary vertex list (one index per line); defaults to the mesh's open edges, required for --cloud");
  }
};

struct Surface {
  SurfaceGraph graph;
  BoundarySet boundary;
  std::optional<TriangleMesh> mesh;
};

Surface load_surface(const SurfaceInput& in) {
  Surface s;
  if (!in.mesh.empty()) {
    TriangleMesh mesh = load_mesh(in.mesh);
    s.graph = mesh_graph(mesh);
    s.boundary = in.boundary.empty() ? extract_boundary(mesh) : load_boundary(in.boundary, mesh.vertex_count());
    s.mesh = std::move(mesh);
  } else if (!in.cloud.empty()) {
    const PointCloud cloud = load_pointcloud(in.cloud);
    if (in.boundary.empty()) throw CLI::ValidationError("--boundary", "required with --cloud");
    s.graph = knn_graph(cloud, in.k);
    s.boundary = load_boundary(in.boundary, cloud.points.size());
  } else {
    throw CLI::ValidationError("input", "one of --mesh or --cloud is required");
  }
  return s;
}

Matrix column(const std::vector<double>& values) {
  Matrix m(static_cast<Eigen::Index>(values.size()), 1);
  for (std::size_t i = 0; i < values.size(); ++i) m(i, 0) = values[i];
  return m;
}

void print_scalar(std::ostream& out, const std::string& name, double value) {
  out << name << " = " << std::setprecision(17) << value << '\n';
}

void add_gen(CLI::App& app, std::function<void()>& action, std::ostream& out) {
  auto* gen = app.add_subcommand("gen", "Generate synthetic fixtures");
  gen->require_subcommand(1);

  auto* roll = gen->add_subcommand("swiss-roll", "Sample a swiss roll point cloud with optional hole or cut");
  auto spec = std::make_shared<SwissRollSpec>();
  auto defect = std::make_shared<std::string>("none");
  auto roll_out = std::make_shared<std::string>();
  auto param_out = std::make_shared<std::string>();
  auto boundary_out = std::make_shared<std::string>();
  roll->add_option("--n", spec->n, "Sample count")->capture_default_str();
  roll->add_option("--stretch", spec->stretch, "Width stretch factor")->capture_default_str();
  roll->add_option("--noise", spec->noise_sigma, "Gaussian noise standard deviation")->capture_default_str();
  roll->add_option("--defect", *defect, "none | hole:u0,v0,u1,v1 | cut:u0,v0,u1,v1 (unit parameter square)")
      ->capture_default_str();
  roll->add_option("--seed", spec->seed, "RNG seed")->capture_default_str();
  roll->add_option("--out", *roll_out, "Output XYZ file")->required();
  roll->add_option("--param-out", *param_out, "Ground-truth 2D coordinates (WHM1, n x 2)");
  roll->add_option("--boundary-out", *boundary_out, "Boundary hint vertex list");
  roll->callback([=, &action, &out] {
    action = [=, &out] {
      SwissRollSpec s = *spec;
      s.defect = RollDefect::parse(*defect);
      const SwissRoll r = gen_swiss_roll(s);
      save_xyz(*roll_out, r.cloud);
      if (!param_out->empty()) {
        Matrix gt(static_cast<Eigen::Index>(r.cloud.points.size()), 2);
        for (std::size_t i = 0; i < r.cloud.points.size(); ++i) gt.row(i) = (*r.cloud.parameterization)[i].transpose();
        save_whm(*param_out, gt);
      }
      if (!boundary_out->empty()) save_boundary(*boundary_out, r.boundary_hint);
      out << "points = " << r.cloud.points.size() << "\nboundary = " << r.boundary_hint.size() << '\n';
    };
  });

  auto* grid = gen->add_subcommand("grid", "Triangulated planar grid with an optional removed block");
  struct GridArgs {
    std::size_t rows = 20, cols = 20;
    double spacing = 1.0;
    std::string defect, out, full_out, keep_out;
  };
  auto g = std::make_shared<GridArgs>();
  grid->add_option("--rows", g->rows, "Grid rows")->capture_default_str();
  grid->add_option("--cols", g->cols, "Grid columns")->capture_default_str();
  grid->add_option("--spacing", g->spacing, "Vertex spacing")->capture_default_str();
  grid->add_option("--defect", g->defect, "Removed vertex block r0,c0,r1,c1 (inclusive)");
  grid->add_option("--out", g->out, "Mesh with the defect removed (OFF)")->required();
  grid->add_option("--full-out", g->full_out, "Defect-free grid (OFF)");
  grid->add_option("--keep-out", g->keep_out, "Kept full-grid vertex indices, one per line");
  grid->callback([=, &action, &out] {
    action = [=, &out] {
      std::optional<GridDefect> d;
      if (!g->defect.empty()) d = GridDefect::parse(g->defect);
      const Grid partial = gen_grid_with_defect(g->rows, g->cols, g->spacing, d);
      save_off(g->out, partial.mesh);
      if (!g->full_out.empty()) save_off(g->full_out, gen_grid_with_defect(g->rows, g->cols, g->spacing).mesh);
      if (!g->keep_out.empty()) save_boundary(g->keep_out, BoundarySet(partial.kept));
      out << "vertices = " << partial.mesh.vertex_count() << "\nfaces = " << partial.mesh.faces.size() << '\n';
    };
  });
}

void add_geodesics(CLI::App& app, std::function<void()>& action, std::ostream& out) {
  auto* cmd = app.add_subcommand("geodesics", "All-pairs graph geodesic distances");
  auto input = std::make_shared<SurfaceInput>();
  auto dist_out = std::make_shared<std::string>();
  auto to_boundary_out = std::make_shared<std::string>();
  input->add_to(*cmd);
  cmd->add_option("--out", *dist_out, "Distance matrix (WHM1)")->required();
  cmd->add_option("--to-boundary-out", *to_boundary_out, "Distance to the boundary per vertex (WHM1, n x 1)");
  cmd->callback([=, &action, &out] {
    action = [=, &out] {
      SurfaceInput in = *input;
      const bool need_boundary = !to_boundary_out->empty();
      if (!need_boundary && !in.cloud.empty() && in.boundary.empty()) {
        const PointCloud cloud = load_pointcloud(in.cloud);
        save_whm(*dist_out, distance_matrix(knn_graph(cloud, in.k)).values());
        out << "vertices = " << cloud.points.size() << '\n';
        return;
      }
      const Surface s = load_surface(in);
      const DistanceMatrix d = distance_matrix(s.graph);
      save_whm(*dist_out, d.values());
      if (need_boundary) save_whm(*to_boundary_out, column(multi_source(s.graph, s.boundary).values));
      out << "vertices = " << d.size() << '\n';
    };
  });
}

void add_boundary(CLI::App& app, std::function<void()>& action, std::ostream& out) {
  auto* cmd = app.add_subcommand("boundary", "Vertices on open mesh edges");
  auto mesh = std::make_shared<std::string>();
  auto list_out = std::make_shared<std::string>();
  cmd->add_option("--mesh", *mesh, "Triangle mesh (ASCII OFF)")->required();
  cmd->add_option("--out", *list_out, "Boundary vertex list")->required();
  cmd->callback([=, &action, &out] {
    action = [=, &out] {
      const BoundarySet b = extract_boundary(load_mesh(*mesh));
      save_boundary(*list_out, b);
      out << "boundary = " << b.size() << '\n';
    };
  });
}

void add_mask(CLI::App& app, std::function<void()>& action, std::ostream& out) {
  auto* cmd = app.add_subcommand("mask", "Consistency threshold and mask of a partial surface");
  struct MaskArgs {
    SurfaceInput input;
    std::string algo = "fast", mode = "wormhole", out, threshold_out, distances_out;
    bool soft = false;
    double c_m = 1.0;
    std::size_t batch = kDefaultBatch;
  };
  auto a = std::make_shared<MaskArgs>();
  a->input.add_to(*cmd);
  cmd->add_option("--algo", a->algo, "Threshold algorithm")->check(CLI::IsMember({"naive", "fast"}))->capture_default_str();
  cmd->add_option("--mode", a->mode, "Criterion")->check(CLI::IsMember({"ct", "wormhole"}))->capture_default_str();
  cmd->add_flag("--soft", a->soft, "Write the soft mask min(K/D, 1) instead of the binary mask");
  cmd->add_option("--c-m", a->c_m, "Metric floor C_M scaling boundary shortcuts by sqrt(C_M)")->capture_default_str();
  cmd->add_option("--batch", a->batch, "Boundary block side for the naive algorithm")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_option("--out", a->out, "Mask (WHM1, 0/1 or soft values)")->required();
  cmd->add_option("--threshold-out", a->threshold_out, "Threshold matrix (WHM1)");
  cmd->add_option("--distances-out", a->distances_out, "Distance matrix (WHM1)");
  cmd->callback([=, &action, &out] {
    action = [=, &out] {
      const Surface s = load_surface(a->input);
      const DistanceMatrix d = distance_matrix(s.graph);
      MaskSet masks;
      if (a->mode == "ct") {
        const DistanceToBoundary db = multi_source(s.graph, s.boundary);
        const auto n = static_cast<Eigen::Index>(d.size());
        masks.threshold.resize(n, n);
        for (Eigen::Index i = 0; i < n; ++i)
          for (Eigen::Index j = 0; j < n; ++j) masks.threshold(i, j) = db.values[i] + db.values[j];
        masks.mask = ct_mask(d, db);
        masks.soft = soft_mask(d, masks.threshold);
      } else {
        const ThresholdAlgorithm algo = a->algo == "naive" ? ThresholdAlgorithm::naive : ThresholdAlgorithm::fast;
        masks = wormhole_masks(s.graph, s.boundary, d, MetricScale(a->c_m), algo, a->batch);
      }
      save_whm(a->out, a->soft ? masks.soft : masks.mask);
      if (!a->threshold_out.empty()) save_whm(a->threshold_out, masks.threshold);
      if (!a->distances_out.empty()) save_whm(a->distances_out, d.values());
      const auto n = static_cast<double>(d.size());
      out << "vertices = " << d.size() << "\nboundary = " << s.boundary.size() << '\n';
      print_scalar(out, "accepted_fraction", (masks.mask.sum() - n) / std::max(1.0, n * n - n));
    };
  });
}

void add_stats(CLI::App& app, std::function<void()>& action, std::ostream& out) {
  auto* cmd = app.add_subcommand("stats", "Consistent and guaranteed pair statistics for a partial selection");
  struct StatsArgs {
    std::string full, keep, out;
    double c_m = 1.0;
    double tol = 1e-9;
  };
  auto a = std::make_shared<StatsArgs>();
  cmd->add_option("--full", a->full, "Full surface mesh (OFF)")->required();
  cmd->add_option("--keep", a->keep, "Kept full-surface vertex indices, one per line")->required();
  cmd->add_option("--c-m", a->c_m, "Metric floor C_M")->capture_default_str();
  cmd->add_option("--tol", a->tol, "Relative tolerance for distance equality")->capture_default_str();
  cmd->add_option("--out", a->out, "Report (key = value lines)")->required();
  cmd->callback([=, &action, &out] {
    action = [=, &out] {
      const TriangleMesh mesh = load_mesh(a->full);
      const SurfaceGraph full = mesh_graph(mesh);
      const BoundarySet keep = load_boundary(a->keep, mesh.vertex_count());
      const PartialSelection selection(keep.indices());
      const PartialSurface partial = induce_partial(full, selection);
      const DistanceMatrix d_full = restrict_distances(distance_matrix(full), selection);
      const DistanceMatrix d_partial = distance_matrix(partial.graph);
      const Matrix consistent = consistent_pairs(d_full, d_partial, a->tol);
      const Matrix ct = ct_mask(d_partial, multi_source(partial.graph, partial.boundary));
      const Matrix cw =
          wormhole_masks(partial.graph, partial.boundary, d_partial, MetricScale(a->c_m), ThresholdAlgorithm::fast).mask;
      const ConsistencyReport report = pair_statistics(consistent, ct, cw);
      save_report(a->out, report);
      write_report(out, report);
    };
  });
}

void add_mds(CLI::App& app, std::function<void()>& action, std::ostream& out) {
  auto* cmd = app.add_subcommand("mds", "Classical scaling or masked stress-majorization embedding");
  struct MdsArgs {
    SurfaceInput input;
    std::string method = "whcie", out, trace_out, truth, init_out;
    MdsOptions options;
    double c_m = 1.0;
  };
  auto a = std::make_shared<MdsArgs>();
  a->input.add_to(*cmd);
  cmd->add_option("--method", a->method, "Embedding method")
      ->check(CLI::IsMember({"classical", "whcie", "tcie"}))
      ->capture_default_str();
  cmd->add_option("--dims", a->options.dims, "Target dimension")->capture_default_str();
  cmd->add_option("--local-radius", a->options.local_radius, "Pairs closer than this always get weight 1")
      ->capture_default_str();
  cmd->add_option("--max-iter", a->options.smacof.max_iter, "SMACOF iteration cap")->capture_default_str();
  cmd->add_option("--rel-tol", a->options.smacof.rel_tol, "SMACOF relative stress decrease to stop")->capture_default_str();
  cmd->add_option("--c-m", a->c_m, "Metric floor C_M for the wormhole mask")->capture_default_str();
  cmd->add_option("--out", a->out, "Embedding (WHM1, n x dims)")->required();
  cmd->add_option("--trace-out", a->trace_out, "Stress per iteration, one value per line");
  cmd->add_option("--init-out", a->init_out, "Classical scaling start (WHM1)");
  cmd->add_option("--truth", a->truth, "Ground-truth coordinates (WHM1) to report the Procrustes error against");
  cmd->callback([=, &action, &out] {
    action = [=, &out] {
      const Surface s = load_surface(a->input);
      MdsOptions options = a->options;
      options.scale = MetricScale(a->c_m);
      Matrix coords, init;
      std::vector<double> trace;
      if (a->method == "classical") {
        const ClassicalScaling cs = classical_scaling(distance_matrix(s.graph), options.dims);
        if (cs.rank_deficient) out << "warning = fewer positive eigenvalues than dimensions\n";
        coords = cs.coords;
        init = cs.coords;
      } else {
        const WeightScheme scheme = a->method == "whcie" ? WeightScheme::wormhole : WeightScheme::ct;
        MdsRun run = masked_mds(s.graph, s.boundary, scheme, options);
        coords = std::move(run.embedding.coords);
        init = std::move(run.initial);
        trace = std::move(run.embedding.stress_trace);
        out << "weighted_pairs = " << run.weighted_pairs << "\niterations = " << run.embedding.iterations << '\n';
        if (!trace.empty()) print_scalar(out, "stress", trace.back());
      }
      save_whm(a->out, coords);
      if (!a->trace_out.empty()) save_values(a->trace_out, trace);
      if (!a->init_out.empty()) save_whm(a->init_out, init);
      if (!a->truth.empty()) print_scalar(out, "procrustes_error", procrustes_error(coords, load_whm(a->truth)));
    };
  });
}

VertexAreas load_areas(const std::string& areas_path, const std::string& mesh_path) {
  if (!mesh_path.empty()) return vertex_areas(load_mesh(mesh_path));
  if (areas_path.empty()) throw CLI::ValidationError("areas", "one of --areas or --partial-mesh is required");
  const Matrix m = load_whm(areas_path);
  if (m.cols() != 1) throw ParseError(areas_path, 0, "areas must be an n x 1 matrix");
  return VertexAreas{m.col(0)};
}

void add_loss(CLI::App& app, std::function<void()>& action, std::ostream& out) {
  auto* cmd = app.add_subcommand("loss", "Masked geodesic, orthogonality, or total matching loss");
  struct LossArgs {
    std::string mode;
    std::string p, dx, dy, mask, areas, full_mesh, partial_mesh, grad_out, c_out;
    std::size_t k_full = 128, k_partial = 80;
    double geo = 0.0, ortho = 0.0;
    double lambda_geo = kDefaultLambdaGeo, lambda_ortho = kDefaultLambdaOrtho;
  };
  auto a = std::make_shared<LossArgs>();
  cmd->add_option("mode", a->mode, "geo | ortho | total")->required()->check(CLI::IsMember({"geo", "ortho", "total"}));
  cmd->add_option("--p", a->p, "Correspondence, partial x full (WHM1)");
  cmd->add_option("--dx", a->dx, "Full-surface distances (WHM1)");
  cmd->add_option("--dy", a->dy, "Partial-surface distances (WHM1)");
  cmd->add_option("--mask", a->mask, "Binary or soft mask (WHM1)");
  cmd->add_option("--areas", a->areas, "Partial vertex areas (WHM1, n x 1)");
  cmd->add_option("--full-mesh", a->full_mesh, "Full surface mesh for the spectral basis");
  cmd->add_option("--partial-mesh", a->partial_mesh, "Partial surface mesh (areas, spectral basis)");
  cmd->add_option("--k-full", a->k_full, "Full basis size")->capture_default_str();
  cmd->add_option("--k-partial", a->k_partial, "Partial basis size")->capture_default_str();
  cmd->add_option("--grad-out", a->grad_out, "Gradient of the geodesic loss w.r.t. P (WHM1)");
  cmd->add_option("--c-out", a->c_out, "Functional map matrix (WHM1)");
  cmd->add_option("--geo", a->geo, "Geodesic loss value for mode total")->capture_default_str();
  cmd->add_option("--ortho", a->ortho, "Orthogonality loss value for mode total")->capture_default_str();
  cmd->add_option("--lambda-geo", a->lambda_geo, "Weight of the geodesic term")->capture_default_str();
  cmd->add_option("--lambda-ortho", a->lambda_ortho, "Weight of the orthogonality term")->capture_default_str();
  cmd->callback([=, &action, &out] {
    action = [=, &out] {
      const auto need = [](const std::string& v, const char* flag) {
        if (v.empty()) throw CLI::ValidationError(flag, "required for this mode");
      };
      if (a->mode == "geo") {
        need(a->p, "--p");
        need(a->dx, "--dx");
        need(a->dy, "--dy");
        need(a->mask, "--mask");
        const Matrix p = load_whm(a->p);
        const DistanceMatrix dx(load_whm(a->dx)), dy(load_whm(a->dy));
        const Matrix mask = load_whm(a->mask);
        const VertexAreas areas = load_areas(a->areas, a->partial_mesh);
        print_scalar(out, "geo", masked_geo_loss(p, dx, dy, mask, areas));
        if (!a->grad_out.empty()) save_whm(a->grad_out, masked_geo_loss_grad(p, dx, dy, mask, areas));
      } else if (a->mode == "ortho") {
        need(a->p, "--p");
        need(a->full_mesh, "--full-mesh");
        need(a->partial_mesh, "--partial-mesh");
        const Matrix p = load_whm(a->p);
        const SpectralBasis full = lbo_basis(load_mesh(a->full_mesh), a->k_full);
        const SpectralBasis partial = lbo_basis(load_mesh(a->partial_mesh), a->k_partial);
        const FunctionalMap fm = functional_map(p, full, partial);
        if (!a->c_out.empty()) save_whm(a->c_out, fm.C);
        out << "rank = " << fm.rank << '\n';
        print_scalar(out, "ortho", ortho_loss(fm));
      } else {
        print_scalar(out, "total", total_loss(a->geo, a->ortho, a->lambda_geo, a->lambda_ortho));
      }
    };
  });
}

void add_correspond(CLI::App& app, std::function<void()>& action, std::ostream& out) {
  auto* cmd = app.add_subcommand("correspond", "Softmax correspondence from per-vertex features");
  struct Args {
    std::string f_full, f_partial, out;
    double tau = 0.07;
  };
  auto a = std::make_shared<Args>();
  cmd->add_option("--f-full", a->f_full, "Full-surface features, n_full x d (WHM1)")->required();
  cmd->add_option("--f-partial", a->f_partial, "Partial-surface features, n_partial x d (WHM1)")->required();
  cmd->add_option("--tau", a->tau, "Softmax temperature")->capture_default_str();
  cmd->add_option("--out", a->out, "Correspondence, n_partial x n_full (WHM1)")->required();
  cmd->callback([=, &action, &out] {
    action = [=, &out] {
      const Correspondence c = softmax_correspondence(load_whm(a->f_full), load_whm(a->f_partial), a->tau);
      save_whm(a->out, c.P);
      out << "rows = " << c.P.rows() << "\ncols = " << c.P.cols() << '\n';
    };
  });
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"whkit: consistent-pair masks, masked MDS and matching losses for partial surfaces", "whkit"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "Worker threads (0 = all cores; WHKIT_THREADS overrides)")->capture_default_str();

  std::function<void()> action;
  add_gen(app, action, out);
  add_geodesics(app, action, out);
  add_boundary(app, action, out);
  add_mask(app, action, out);
  add_stats(app, action, out);
  add_mds(app, action, out);
  add_loss(app, action, out);
  add_correspond(app, action, out);

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  if (const char* env = std::getenv("WHKIT_THREADS")) threads = std::atoi(env);
  set_thread_count(threads);

  try {
    if (action) action();
  } catch (const CLI::ValidationError& e) {
    err << "whkit: " << e.what() << '\n';
    return kUsage;
  } catch (const ParseError& e) {
    err << "whkit: parse error: " << e.what() << '\n';
    return kInput;
  } catch (const IoError& e) {
    err << "whkit: " << e.what() << '\n';
    return kInput;
  } catch (const ContractError& e) {
    err << "whkit: " << e.what() << '\n';
    return kNumeric;
  } catch (const std::exception& e) {
    err << "whkit: " << e.what() << '\n';
    return kNumeric;
  }
  return kOk;
}

}  // namespace whkit::cli
