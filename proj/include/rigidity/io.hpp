#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "rigidity/certify.hpp"
#include "rigidity/framework.hpp"

namespace rigidity::io {

/// Shortest round-trip decimal rendering of a double (17 significant digits).
inline std::string format_double(double x) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.17g", x);
  return buffer;
}

/// Serialize a framework as JSON with `dimension`, `vertices` (rows of
/// coordinates) and `edges` (pairs of vertex indices).  Coordinates are
/// written with 17 significant digits so that reading the file back
/// reproduces them bit for bit.
inline std::string framework_to_json(const Framework& f) {
  std::ostringstream out;
  out << "{\n  \"dimension\": " << f.dim() << ",\n  \"vertices\": [\n";
  for (int i = 0; i < f.vertex_count(); ++i) {
    out << "    [";
    for (int k = 0; k < f.dim(); ++k) {
      if (k) out << ", ";
      out << format_double(f.config.points()(i, k));
    }
    out << (i + 1 < f.vertex_count() ? "],\n" : "]\n");
  }
  out << "  ],\n  \"edges\": [\n";
  for (int e = 0; e < f.edge_count(); ++e) {
    const Edge& ed = f.graph.edges()[e];
    out << "    [" << ed.first << ", " << ed.second
        << (e + 1 < f.edge_count() ? "],\n" : "]\n");
  }
  out << "  ]\n}\n";
  return out.str();
}

inline Framework framework_from_json(const std::string& text, const Tolerance& tol = {}) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("framework JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("dimension") || !doc.contains("vertices") ||
      !doc.contains("edges"))
    throw std::invalid_argument(
        "framework JSON: need an object with dimension, vertices and edges");
  if (!doc["dimension"].is_number_integer())
    throw std::invalid_argument("framework JSON: dimension must be an integer");
  const int d = doc["dimension"].get<int>();
  if (d < 1) throw std::invalid_argument("framework JSON: dimension must be >= 1");

  const auto& verts = doc["vertices"];
  if (!verts.is_array() || verts.empty())
    throw std::invalid_argument("framework JSON: vertices must be a non-empty array");
  Matrix points(verts.size(), d);
  for (size_t i = 0; i < verts.size(); ++i) {
    const auto& row = verts[i];
    if (!row.is_array() || static_cast<int>(row.size()) != d)
      throw std::invalid_argument(
          "framework JSON: each vertex needs exactly 'dimension' coordinates");
    for (int k = 0; k < d; ++k) {
      if (!row[static_cast<size_t>(k)].is_number())
        throw std::invalid_argument("framework JSON: coordinates must be numbers");
      points(static_cast<Eigen::Index>(i), k) = row[static_cast<size_t>(k)].get<double>();
    }
  }

  const auto& edges_json = doc["edges"];
  if (!edges_json.is_array())
    throw std::invalid_argument("framework JSON: edges must be an array");
  std::vector<Edge> edges;
  edges.reserve(edges_json.size());
  for (const auto& pair : edges_json) {
    if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number_integer() ||
        !pair[1].is_number_integer())
      throw std::invalid_argument(
          "framework JSON: each edge must be a pair of vertex indices");
    edges.emplace_back(pair[0].get<int>(), pair[1].get<int>());
  }
  return Framework(Graph(static_cast<int>(verts.size()), std::move(edges)),
                   Configuration(std::move(points), tol), tol);
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot write file: " + path);
  out << content;
  if (!out.flush()) throw std::runtime_error("failed writing file: " + path);
}

inline Framework load_framework(const std::string& path, const Tolerance& tol = {}) {
  return framework_from_json(read_text_file(path), tol);
}

inline void save_framework(const Framework& f, const std::string& path) {
  write_text_file(path, framework_to_json(f));
}

namespace detail {

inline nlohmann::ordered_json matrix_to_json(const Matrix& m) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::ordered_json row = nlohmann::ordered_json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline nlohmann::ordered_json signature_to_json(const SignatureTriple& s) {
  return {{"negatives", s.negatives}, {"zeros", s.zeros}, {"positives", s.positives}};
}

}  // namespace detail

inline nlohmann::ordered_json certificate_to_json(const SuperStabilityCertificate& c) {
  nlohmann::ordered_json out;
  out["verdict"] = to_string(c.verdict);
  out["stress_rank"] = c.stress_rank;
  out["target_rank"] = c.target_rank;
  out["witness_stress"] =
      c.witness_stress ? detail::matrix_to_json(c.witness_stress->omega)
                       : nlohmann::ordered_json(nullptr);
  out["witness_conic"] = c.witness_conic ? detail::matrix_to_json(c.witness_conic->form)
                                         : nlohmann::ordered_json(nullptr);
  return out;
}

inline nlohmann::ordered_json report_to_json(const AnalysisReport& r) {
  nlohmann::ordered_json out;
  out["framework"] = {{"vertex_count", r.vertex_count},
                      {"dimension", r.dim},
                      {"edge_count", r.edge_count}};
  out["has_conic"] = r.has_conic;
  out["conic_space_dim"] = r.conic_space_dim;
  out["is_ruled"] = r.ruled;
  out["ruling_space_dim"] = r.ruling_space_dim;
  out["is_neighborhood_affine_rigid"] = r.neighborhood_affine_rigid;
  out["neighborhood_affine_dim"] = r.neighborhood_affine_dim;
  out["stress_space_dim"] = r.stress_space_dim;
  out["max_generic_stress_rank"] = r.max_generic_stress_rank;
  out["target_rank"] = r.target_rank;
  out["psd_stress_rank"] =
      r.psd_stress_rank ? nlohmann::ordered_json(*r.psd_stress_rank)
                        : nlohmann::ordered_json(nullptr);
  out["super_stability"] = certificate_to_json(r.super_stability);
  out["sap"] = r.sap ? nlohmann::ordered_json(*r.sap)
                     : nlohmann::ordered_json("not_applicable");
  nlohmann::ordered_json flags = nlohmann::ordered_json::array();
  for (const ConsistencyFlag& f : r.consistency_flags)
    flags.push_back({{"name", f.name}, {"triggered", f.triggered}, {"passed", f.passed}});
  out["consistency_flags"] = std::move(flags);
  return out;
}

inline std::string certificate_to_text(const SuperStabilityCertificate& c) {
  std::ostringstream out;
  out << "verdict: " << to_string(c.verdict) << "\n";
  out << "stress rank: " << c.stress_rank << " (target " << c.target_rank << ")\n";
  out << "witness stress: " << (c.witness_stress ? "yes" : "no") << "\n";
  out << "witness conic: " << (c.witness_conic ? "yes" : "no") << "\n";
  return out.str();
}

inline std::string report_to_text(const AnalysisReport& r) {
  std::ostringstream out;
  out << "framework: n=" << r.vertex_count << " d=" << r.dim << " m=" << r.edge_count
      << "\n";
  out << "conic at infinity: " << (r.has_conic ? "yes" : "no") << " (dim "
      << r.conic_space_dim << ")\n";
  out << "ruled: " << (r.ruled ? "yes" : "no") << " (dim " << r.ruling_space_dim
      << ")\n";
  out << "neighborhood affine rigid: " << (r.neighborhood_affine_rigid ? "yes" : "no")
      << " (space dim " << r.neighborhood_affine_dim << ")\n";
  out << "stress space dim: " << r.stress_space_dim << "\n";
  out << "max generic stress rank: " << r.max_generic_stress_rank << " (target "
      << r.target_rank << ")\n";
  out << "psd stress rank: ";
  if (r.psd_stress_rank)
    out << *r.psd_stress_rank << "\n";
  else
    out << "none\n";
  out << "super stability: " << to_string(r.super_stability.verdict) << "\n";
  out << "sap: ";
  if (r.sap)
    out << (*r.sap ? "holds" : "fails") << "\n";
  else
    out << "not applicable\n";
  out << "consistency:";
  for (const ConsistencyFlag& f : r.consistency_flags) {
    out << " " << f.name << "="
        << (f.passed ? (f.triggered ? "ok" : "vacuous") : "VIOLATED");
  }
  out << "\n";
  return out.str();
}

/// Orthographic SVG sketch of a framework.  One- and two-dimensional inputs
/// are drawn directly; higher-dimensional ones are projected onto the plane
/// orthogonal to the fixed viewing direction (1, 1, 1)/sqrt(3) of their first
/// three coordinates.
inline std::string framework_to_svg(const Framework& f) {
  const int n = f.vertex_count();
  Matrix flat(n, 2);
  if (f.dim() == 1) {
    flat.col(0) = f.config.points().col(0);
    flat.col(1).setZero();
  } else if (f.dim() == 2) {
    flat = f.config.points();
  } else {
    Eigen::Vector3d view(1, 1, 1);
    view.normalize();
    Eigen::Vector3d u = view.cross(Eigen::Vector3d::UnitZ()).normalized();
    Eigen::Vector3d w = view.cross(u).normalized();
    const Matrix xyz = f.config.points().leftCols(3);
    flat.col(0) = xyz * u;
    flat.col(1) = xyz * w;
  }

  const double min_x = flat.col(0).minCoeff(), max_x = flat.col(0).maxCoeff();
  const double min_y = flat.col(1).minCoeff(), max_y = flat.col(1).maxCoeff();
  const double span = std::max({max_x - min_x, max_y - min_y, 1e-9});
  const double size = 640.0, margin = 40.0;
  const double scale = (size - 2 * margin) / span;
  const auto sx = [&](double x) { return margin + (x - min_x) * scale; };
  const auto sy = [&](double y) { return size - margin - (y - min_y) * scale; };

  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << size
      << "\" height=\"" << size << "\" viewBox=\"0 0 " << size << " " << size
      << "\">\n";
  out << "  <g stroke=\"#34495e\" stroke-width=\"2\" stroke-linecap=\"round\">\n";
  for (const Edge& e : f.graph.edges())
    out << "    <line x1=\"" << sx(flat(e.first, 0)) << "\" y1=\""
        << sy(flat(e.first, 1)) << "\" x2=\"" << sx(flat(e.second, 0)) << "\" y2=\""
        << sy(flat(e.second, 1)) << "\"/>\n";
  out << "  </g>\n  <g fill=\"#c0392b\">\n";
  for (int i = 0; i < n; ++i)
    out << "    <circle cx=\"" << sx(flat(i, 0)) << "\" cy=\"" << sy(flat(i, 1))
        << "\" r=\"4\"/>\n";
  out << "  </g>\n</svg>\n";
  return out.str();
}

}  // namespace rigidity::io
