#pragma once

#include <cstdint>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rigidity/affine.hpp"
#include "rigidity/certify.hpp"
#include "rigidity/gallery.hpp"
#include "rigidity/io.hpp"
#include "rigidity/operations.hpp"

namespace rigidity {

namespace detail {

inline std::vector<double> parse_number_list(const std::string& text) {
  std::vector<double> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    std::istringstream field(item);
    double value = 0.0;
    if (!(field >> value))
      throw std::invalid_argument("expected a comma-separated list of numbers, got '" +
                                  text + "'");
    std::string rest;
    if (field >> rest)
      throw std::invalid_argument("malformed number '" + item + "'");
    out.push_back(value);
  }
  if (out.empty())
    throw std::invalid_argument("expected a comma-separated list of numbers");
  return out;
}

inline void emit_framework(const Framework& f, const std::string& out_path,
                           const std::string& svg_path) {
  const std::string text = io::framework_to_json(f);
  if (out_path.empty())
    std::cout << text;
  else
    io::write_text_file(out_path, text);
  if (!svg_path.empty()) io::write_text_file(svg_path, io::framework_to_svg(f));
}

}  // namespace detail

/// Entry point of the command-line tool; `args` excludes the program name.
/// Returns 0 on success and 2 on any failure, after printing a one-line
/// diagnostic to stderr.
inline int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"certify rigidity properties of bar-joint frameworks"};
  app.require_subcommand(1);

  std::string file;
  std::string out_path;
  std::string svg_path;
  std::string report_format = "text";
  std::uint64_t seed = 12345;
  double rel_tol = 1e-9;
  double abs_floor = 1e-12;
  double flex_t = 0.0;
  double cone_height = 1.0;
  std::string direction_text;
  std::string matrix_text;
  std::string gallery_name;
  std::vector<std::string> gallery_params;

  const auto add_input = [&](CLI::App* cmd) {
    cmd->add_option("file", file, "framework JSON file")->required();
  };
  const auto add_tol = [&](CLI::App* cmd) {
    cmd->add_option("--tol", rel_tol, "relative rank/residual cutoff (default 1e-9)");
    cmd->add_option("--floor", abs_floor, "absolute cutoff floor (default 1e-12)");
  };
  const auto add_out = [&](CLI::App* cmd) {
    cmd->add_option("--out", out_path, "write the resulting framework here (default: stdout)");
    cmd->add_option("--emit-svg", svg_path, "also write an SVG sketch to this path");
  };

  CLI::App* cmd_analyze = app.add_subcommand(
      "analyze", "run every detector on a framework and report the findings");
  add_input(cmd_analyze);
  add_tol(cmd_analyze);
  cmd_analyze->add_option("--seed", seed, "seed for randomized stress searches");
  cmd_analyze->add_option("--report", report_format, "output format: text or json")
      ->check(CLI::IsMember({"text", "json"}));
  cmd_analyze->add_option("--emit-svg", svg_path, "write an SVG sketch of the input");

  CLI::App* cmd_certify =
      app.add_subcommand("certify", "decide super stability and print a certificate");
  add_input(cmd_certify);
  add_tol(cmd_certify);
  cmd_certify->add_option("--seed", seed, "seed for randomized stress searches");
  cmd_certify->add_option("--report", report_format, "output format: text or json")
      ->check(CLI::IsMember({"text", "json"}));

  CLI::App* cmd_flex = app.add_subcommand(
      "flex", "apply the affine flex sqrt(I + t Q) for the framework's conic Q");
  add_input(cmd_flex);
  add_tol(cmd_flex);
  cmd_flex->add_option("--t", flex_t, "flex parameter")->required();
  add_out(cmd_flex);

  CLI::App* cmd_perturb = app.add_subcommand(
      "perturb", "move vertices by the conic bump x -> x + (x^T Q x) v");
  add_input(cmd_perturb);
  add_tol(cmd_perturb);
  cmd_perturb
      ->add_option("--direction", direction_text,
                   "bump direction v as comma-separated coordinates")
      ->required();
  add_out(cmd_perturb);

  CLI::App* cmd_cone =
      app.add_subcommand("cone", "lift the framework to a cone one dimension up");
  add_input(cmd_cone);
  add_tol(cmd_cone);
  cmd_cone->add_option("--height", cone_height, "apex height (default 1)");
  add_out(cmd_cone);

  CLI::App* cmd_slice = app.add_subcommand(
      "slice", "cut the apex (vertex 0) off a cone framework; slides the base flat first "
               "when necessary");
  add_input(cmd_slice);
  add_tol(cmd_slice);
  add_out(cmd_slice);

  CLI::App* cmd_transform = app.add_subcommand(
      "transform", "apply a projective transform given as a (d+1)x(d+1) matrix");
  add_input(cmd_transform);
  add_tol(cmd_transform);
  cmd_transform
      ->add_option("--matrix", matrix_text,
                   "row-major matrix entries, comma-separated")
      ->required();
  add_out(cmd_transform);

  CLI::App* cmd_gallery =
      app.add_subcommand("gallery", "emit one of the built-in example frameworks");
  cmd_gallery->add_option("name", gallery_name, "generator name")->required();
  cmd_gallery
      ->add_option("--param", gallery_params,
                   "generator parameter as key=value (repeatable)")
      ->allow_extra_args(false);
  add_out(cmd_gallery);

  try {
    std::vector<const char*> argv;
    argv.push_back("rigidity");
    for (const std::string& a : args) argv.push_back(a.c_str());
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "error: " << e.what() << std::endl;
    return 2;
  }

  try {
    Tolerance tol;
    tol.relative_cutoff = rel_tol;
    tol.absolute_floor = abs_floor;
    tol.validate();

    if (cmd_analyze->parsed()) {
      const Framework f = io::load_framework(file, tol);
      const AnalysisReport report = analyze(f, seed, {}, tol);
      if (report_format == "json")
        std::cout << io::report_to_json(report).dump(2) << "\n";
      else
        std::cout << io::report_to_text(report);
      if (!svg_path.empty()) io::write_text_file(svg_path, io::framework_to_svg(f));
    } else if (cmd_certify->parsed()) {
      const Framework f = io::load_framework(file, tol);
      const SuperStabilityCertificate cert = is_super_stable(f, seed, {}, tol);
      if (report_format == "json")
        std::cout << io::certificate_to_json(cert).dump(2) << "\n";
      else
        std::cout << io::certificate_to_text(cert);
    } else if (cmd_flex->parsed()) {
      const Framework f = io::load_framework(file, tol);
      const std::vector<ConicForm> conics = conic_space(f, tol);
      if (conics.empty())
        throw std::invalid_argument(
            "flex: framework has no conic at infinity, so no affine flex exists");
      const AffineMap map = affine_flex_path(conics.front(), flex_t, tol);
      detail::emit_framework(
          Framework(f.graph,
                    Configuration(map.apply_points(f.config.points()), tol), tol),
          out_path, svg_path);
    } else if (cmd_perturb->parsed()) {
      const Framework f = io::load_framework(file, tol);
      const std::vector<ConicForm> conics = conic_space(f, tol);
      if (conics.empty())
        throw std::invalid_argument(
            "perturb: framework has no conic at infinity to perturb along");
      const std::vector<double> entries = detail::parse_number_list(direction_text);
      if (static_cast<int>(entries.size()) != f.dim())
        throw std::invalid_argument("perturb: direction needs exactly " +
                                    std::to_string(f.dim()) + " coordinates");
      const PerturbationMap map(
          conics.front(),
          Eigen::Map<const Vector>(entries.data(),
                                   static_cast<Eigen::Index>(entries.size())));
      detail::emit_framework(
          Framework(f.graph, apply_perturbation(map, f.config, tol), tol), out_path,
          svg_path);
    } else if (cmd_cone->parsed()) {
      const Framework f = io::load_framework(file, tol);
      detail::emit_framework(cone(f, cone_height, tol).framework, out_path, svg_path);
    } else if (cmd_slice->parsed()) {
      const ConeFramework cf(io::load_framework(file, tol));
      const ConeFramework flat =
          detail::flat_base_hyperplane(cf, tol) ? cf : slide_to_flat(cf, tol).framework;
      detail::emit_framework(slice(flat, tol), out_path, svg_path);
    } else if (cmd_transform->parsed()) {
      const Framework f = io::load_framework(file, tol);
      const std::vector<double> entries = detail::parse_number_list(matrix_text);
      const int hd = f.dim() + 1;
      if (static_cast<int>(entries.size()) != hd * hd)
        throw std::invalid_argument("transform: matrix needs exactly " +
                                    std::to_string(hd * hd) + " entries");
      Matrix h(hd, hd);
      for (int i = 0; i < hd; ++i)
        for (int j = 0; j < hd; ++j)
          h(i, j) = entries[static_cast<size_t>(i * hd + j)];
      detail::emit_framework(
          projective_transform(f, ProjectiveTransform(std::move(h), tol), tol),
          out_path, svg_path);
    } else if (cmd_gallery->parsed()) {
      gallery::GallerySpec spec;
      spec.name = gallery_name;
      for (const std::string& p : gallery_params) {
        const size_t eq = p.find('=');
        if (eq == std::string::npos || eq == 0)
          throw std::invalid_argument("gallery: parameters must look like key=value");
        spec.parameters[p.substr(0, eq)] = p.substr(eq + 1);
      }
      detail::emit_framework(gallery::generate(spec), out_path, svg_path);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 2;
  }
  return 0;
}

}  // namespace rigidity
