#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "phyllo/colouring.hpp"
#include "phyllo/contfrac.hpp"
#include "phyllo/errors.hpp"
#include "phyllo/fitgeo.hpp"
#include "phyllo/hyperbolic.hpp"
#include "phyllo/json_io.hpp"
#include "phyllo/linearize.hpp"
#include "phyllo/parastichy.hpp"
#include "phyllo/phyllo_set.hpp"
#include "phyllo/svg.hpp"
#include "phyllo/voronoi.hpp"

using nlohmann::json;
using namespace phyllo;

namespace {

json report(const char* command) {
  json j;
  j["schema"] = 1;
  j["command"] = command;
  return j;
}

void emit(const json& j, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::ofstream os(out_path);
  if (!os) throw Error("cannot open output file " + out_path);
  os << j.dump(2) << "\n";
}

void write_points_csv(const PhylloSet& set, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw Error("cannot open output file " + path);
  char buf[96];
  for (const auto& p : set.points) {
    std::snprintf(buf, sizeof buf, "%lld,%.17g,%.17g\n", p.n, p.x, p.y);
    os << buf;
  }
}

std::vector<std::complex<double>> read_xy_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error("cannot open input file " + path);
  std::vector<std::complex<double>> pts;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    for (char& c : line)
      if (c == ',' || c == ';' || c == '\t') c = ' ';
    std::istringstream ls(line);
    double x, y;
    if (ls >> x >> y) {
      double extra;
      if (ls >> extra) {  // three columns: treat as n,x,y
        pts.emplace_back(y, extra);
      } else {
        pts.emplace_back(x, y);
      }
    }
    // header lines simply fail to parse and are skipped
  }
  return pts;
}

void render_point_svg(const PhylloSet& set, double extent, const std::string& path) {
  svg::Document doc(-extent, -extent, extent, extent, 12.0);
  for (const auto& p : set.points) {
    if (std::abs(p.x) > extent || std::abs(p.y) > extent) continue;
    doc.circle(p.x, p.y, 0.08, "black");
  }
  doc.save(path);
}

const char* kFourColours[4] = {"#e6550d", "#3182bd", "#31a354", "#f7e11a"};

void render_voronoi_svg(const voronoi::VoronoiDiagram& diag, const std::string& path,
                        const colouring::ColourMap* colours, bool black_white_mode) {
  double r = diag.clip_radius;
  svg::Document doc(-r, -r, r, r, 12.0);
  for (size_t i = 0; i < diag.cells.size(); ++i) {
    const auto& c = diag.cells[i];
    if (c.verts.empty()) continue;
    bool inside = true;
    for (const auto& v : c.verts)
      if (std::abs(v) > r) inside = false;
    if (!inside) continue;
    std::string fill = "#f0f0f0";
    if (colours) {
      auto it = colours->cell_colour.find(static_cast<int>(i));
      if (it != colours->cell_colour.end()) {
        if (black_white_mode) {
          // collapse the two monodromy orbits to black/white (site parity)
          fill = (c.site % 2 != 0) ? "white" : "#303030";
        } else {
          fill = kFourColours[it->second[0] * 2 + it->second[1]];
        }
      }
    } else {
      size_t e = c.verts.size();
      fill = e == 5 ? "#fc9272" : (e == 7 ? "#9ecae1" : (e == 4 ? "#fee08b" : "#f0f0f0"));
    }
    doc.polygon(c.verts, fill, "#555555", 0.015);
  }
  doc.save(path);
}

void render_parastichy_svg(const PhylloSet& set, const parastichy::ParastichyReport& rep,
                           double extent, const std::string& path) {
  svg::Document doc(-extent, -extent, extent, extent, 12.0);
  auto draw_family = [&](long long step, const std::string& colour) {
    if (step <= 0) return;
    for (long long cls = 0; cls < step; ++cls) {
      std::vector<std::complex<double>> chain;
      for (long long n = cls; n <= set.points.back().n; n += step) {
        const PhylloPoint* p = set.find(n);
        if (!p) continue;
        if (std::abs(p->x) > extent || std::abs(p->y) > extent) {
          if (!chain.empty()) break;
          continue;
        }
        chain.push_back(p->pos());
      }
      if (chain.size() > 1) doc.polyline(chain, colour, 0.03);
    }
  };
  draw_family(rep.primary_step, "#d95f02");
  draw_family(rep.secondary_step, "#7570b3");
  for (const auto& p : set.points)
    if (std::abs(p.x) <= extent && std::abs(p.y) <= extent)
      doc.circle(p.x, p.y, 0.07, "black");
  doc.save(path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"phyllotactic point sets, their modular geodesics and analyses"};
  app.require_subcommand(1);

  std::string theta_expr = "golden";
  long long n_value = 400;
  long long whorl = 1;
  double clip = 0.0;
  double t_min = 1.0, t_max = 1000.0;
  int samples = 64;
  double radius = 5.0, slack = 1.2;
  std::pair<double, double> annulus{0.0, 0.0};
  std::string out_path, svg_path, in_path, mode = "sunflower";
  double eps = 1e-15;
  long long seed = 1;
  int threads = 1;
  app.add_option("--seed", seed, "seed for randomized refinements (deterministic default)");
  app.add_option("--threads", threads, "worker threads for parallelizable analyses");

  auto add_theta = [&](CLI::App* cmd) {
    cmd->add_option("--theta", theta_expr,
                    "divergence parameter: golden, p/q, decimals, sqrt(d), "
                    "(a+b*sqrt(d))/c, exp(-1)");
    cmd->add_option("--eps", eps, "tolerance for Float parameters");
  };

  auto* gen = app.add_subcommand("gen", "generate a phyllotactic point set as CSV");
  add_theta(gen);
  gen->add_option("--n", n_value, "largest seed index");
  gen->add_option("--whorl", whorl, "whorl order d (1 = plain)");
  gen->add_option("--out", out_path, "output CSV path (n,x,y)")->required();
  gen->add_option("--svg", svg_path, "optional point plot");

  auto* geo = app.add_subcommand("geodesic", "sample the phyllotactic geodesic");
  add_theta(geo);
  geo->add_option("--t-min", t_min);
  geo->add_option("--t-max", t_max);
  geo->add_option("--samples", samples);
  geo->add_option("--out", out_path, "output JSON path (default stdout)");

  auto* lat = app.add_subcommand("lattice", "local lattice model at index n");
  add_theta(lat);
  lat->add_option("--n", n_value)->required();
  lat->add_option("--closeness-radius", radius, "also compute the ε certificate at this radius");
  lat->add_flag("--closeness", "include the ε certificate");
  lat->add_option("--out", out_path);

  auto* close = app.add_subcommand("closeness", "ε-closeness certificate");
  add_theta(close);
  close->add_option("--n", n_value)->required();
  close->add_option("--radius", radius);
  close->add_option("--slack", slack);
  close->add_option("--out", out_path);

  auto* vor = app.add_subcommand("voronoi", "Voronoi statistics and rendering");
  add_theta(vor);
  vor->add_option("--n", n_value, "largest seed index");
  vor->add_option("--clip", clip, "clip disc radius (default sqrt(n) - 5)");
  vor->add_option("--annulus", annulus, "annulus r_in,r_out for area stats");
  vor->add_option("--svg", svg_path);
  vor->add_option("--out", out_path);

  auto* par = app.add_subcommand("parastichy", "families, transitions and c=a+b");
  add_theta(par);
  par->add_option("--n", n_value)->required();
  par->add_option("--t-min", t_min, "transition scan start (default n/40)");
  par->add_option("--t-max", t_max, "transition scan end (default 4n)");
  par->add_option("--svg", svg_path, "spiral overlay plot");
  par->add_option("--out", out_path);

  auto* col = app.add_subcommand("colour", "four-colour / black-white rendering");
  add_theta(col);
  col->add_option("--n", n_value, "largest seed index");
  col->add_option("--clip", clip, "clip radius (default sqrt(n) - 5)");
  col->add_option("--annulus", annulus, "annulus r_in,r_out")->required();
  col->add_option("--mode", mode, "four | bw");
  col->add_option("--whorl", whorl, "whorl order d");
  col->add_option("--svg", svg_path);
  col->add_option("--out", out_path);

  auto* fit = app.add_subcommand("fit", "sunflower or geodesic fit from CSV");
  fit->add_option("--in", in_path, "input CSV of x,y seed centers")->required();
  fit->add_option("--mode", mode, "sunflower | geodesic");
  fit->add_option("--out", out_path);

  auto* ident = app.add_subcommand("identities", "continued-fraction identity report");
  add_theta(ident);
  ident->add_option("--n", n_value, "check identities up to this index");
  ident->add_option("--out", out_path);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;  // validation error
  }

  try {
    RealParam theta = RealParam::parse(theta_expr, eps);

    if (gen->parsed()) {
      PhylloSet set = whorl > 1 ? generate_whorled(theta, whorl, n_value)
                                : generate(theta, n_value);
      write_points_csv(set, out_path);
      if (!svg_path.empty())
        render_point_svg(set, std::sqrt(static_cast<double>(n_value)) + 1.0, svg_path);
      return 0;
    }

    if (geo->parsed()) {
      json j = report("geodesic");
      j["theta"] = theta.to_string();
      j["arc"] = to_json(hyperbolic::phyllotactic_arc(theta));
      json samples_json = json::array();
      for (int k = 0; k < samples; ++k) {
        double t = t_min * std::pow(t_max / t_min, samples > 1 ? double(k) / (samples - 1) : 0.0);
        auto z = hyperbolic::phyllotactic_geodesic(theta, t);
        auto red = hyperbolic::reduce_to_fundamental_domain(z);
        samples_json.push_back({{"t", t},
                                {"point", to_json(z)},
                                {"reduced", to_json(red.point)},
                                {"map", to_json(red.map)}});
      }
      j["samples"] = samples_json;
      emit(j, out_path);
      return 0;
    }

    if (lat->parsed()) {
      auto model = linearize::linear_model(theta, n_value);
      json j = report("lattice");
      j["theta"] = theta.to_string();
      j["n"] = n_value;
      j.update(to_json(model));
      if (lat->count("--closeness") || lat->count("--closeness-radius"))
        j["epsilon"] = linearize::closeness(theta, n_value, radius, slack);
      emit(j, out_path);
      return 0;
    }

    if (close->parsed()) {
      json j = report("closeness");
      j["theta"] = theta.to_string();
      j["n"] = n_value;
      j["radius"] = radius;
      j["epsilon"] = linearize::closeness(theta, n_value, radius, slack);
      emit(j, out_path);
      return 0;
    }

    if (vor->parsed()) {
      double clip_r = clip > 0 ? clip : std::sqrt(static_cast<double>(n_value)) - 5.0;
      PhylloSet set = generate(theta, n_value);
      auto diag = voronoi::compute(set, clip_r);
      auto hist = voronoi::classify_cells(diag);
      json j = report("voronoi");
      j["theta"] = theta.to_string();
      j["clip_radius"] = clip_r;
      j["cells"] = diag.cells.size();
      json by_edges = json::object();
      for (auto& [edges, count] : hist.by_edge_count)
        by_edges[std::to_string(edges)] = count;
      j["cell_classes"] = by_edges;
      j["short_edges"] = hist.short_edge_total;
      if (annulus.second > annulus.first)
        j["area_stats"] = to_json(voronoi::cell_area_stats(diag, annulus.first, annulus.second));
      auto defects = voronoi::defect_circles(theta, {1.0, clip_r * clip_r});
      j["defect_radii"] = defects.radii;
      j["rational_degenerate"] = defects.rational_degenerate;
      if (!svg_path.empty()) render_voronoi_svg(diag, svg_path, nullptr, false);
      emit(j, out_path);
      return 0;
    }

    if (par->parsed()) {
      auto fam = parastichy::families_at(theta, n_value);
      json j = report("parastichy");
      j["theta"] = theta.to_string();
      j["n"] = n_value;
      j["families"] = to_json(fam);
      double lo = par->count("--t-min") ? t_min : std::max(1.0, double(n_value) / 40.0);
      double hi = par->count("--t-max") ? t_max : 4.0 * double(n_value);
      auto events = parastichy::transitions(theta, {lo, hi});
      json evs = json::array();
      for (const auto& ev : events) {
        json e = to_json(ev);
        if (ev.kind == parastichy::TransitionEvent::Kind::II) {
          try {
            e["c_equals_a_plus_b"] = parastichy::verify_cab(theta, ev);
          } catch (const Error&) {
            e["c_equals_a_plus_b"] = nullptr;
          }
        }
        evs.push_back(e);
      }
      j["transitions"] = evs;
      if (!svg_path.empty()) {
        PhylloSet set = generate(theta, 2 * n_value);
        render_parastichy_svg(set, fam, std::sqrt(2.0 * n_value), svg_path);
      }
      emit(j, out_path);
      return 0;
    }

    if (col->parsed()) {
      double clip_r = clip > 0 ? clip : std::sqrt(static_cast<double>(n_value) /
                                                  static_cast<double>(whorl)) - 5.0;
      PhylloSet set = whorl > 1 ? generate_whorled(theta, whorl, n_value)
                                : generate(theta, n_value);
      auto diag = voronoi::compute(set, clip_r);
      auto cm = colouring::four_colour(set, diag, annulus);
      json j = report("colour");
      j["theta"] = theta.to_string();
      j["annulus"] = {annulus.first, annulus.second};
      j["monodromy"] = {cm.monodromy[0], cm.monodromy[1]};
      j["steps"] = {cm.step1, cm.step2};
      j["cells_coloured"] = cm.cell_colour.size();
      json assignment = json::array();
      for (const auto& [id, col] : cm.cell_colour) {
        long long site = diag.cells[static_cast<size_t>(id)].site;
        if (mode == "bw")
          assignment.push_back({{"site", site}, {"stripe", site % 2 != 0 ? "white" : "black"}});
        else
          assignment.push_back({{"site", site}, {"colour", {col[0], col[1]}}});
      }
      j["assignment"] = assignment;
      if (!svg_path.empty()) render_voronoi_svg(diag, svg_path, &cm, mode == "bw");
      emit(j, out_path);
      return 0;
    }

    if (fit->parsed()) {
      auto pts = read_xy_csv(in_path);
      auto obs = fitgeo::make_observation(std::move(pts));
      json j = report("fit");
      if (mode == "geodesic") {
        auto inv = fitgeo::local_invariants(obs);
        auto gfit = fitgeo::fit_geodesic(inv.reduced);
        j["mode"] = "geodesic";
        j["invariants"] = inv.reduced.size();
        j["skipped"] = inv.skipped;
        j.update(to_json(gfit));
      } else {
        auto sfit = fitgeo::fit_sunflower(obs);
        j["mode"] = "sunflower";
        j.update(to_json(sfit));
      }
      emit(j, out_path);
      return 0;
    }

    if (ident->parsed()) {
      auto rep = contfrac::verify_identities(theta, n_value);
      json j = report("identities");
      j["theta"] = theta.to_string();
      j["n_max"] = rep.n_max;
      j["checks"] = rep.checks;
      j["max_residual"] = rep.max_residual;
      j["determinant_exact"] = rep.determinant_exact;
      j["pass"] = rep.determinant_exact &&
                  rep.max_residual < (theta.is_exact() ? 1e-9 : 1e-6);
      emit(j, out_path);
      return 0;
    }
  } catch (const ParseError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << "computation error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
