#include "qpecost/report/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>

namespace qpecost::report {

std::string hex(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

Provenance provenance(const chem::Molecule& mol, const chem::BasisSet& basis) {
  return {hex(mol.hash()), hex(basis.hash()), basis.name(), QPECOST_VERSION};
}

Provenance provenance(const std::string& fcidump_path, const std::string& content) {
  return {"", hex(chem::fnv1a(content)), fcidump_path, QPECOST_VERSION};
}

json make_report(const std::string& kind, const Provenance& prov, json payload) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = kind;
  j["provenance"] = {{"geometry_hash", prov.geometry_hash},
                     {"basis_hash", prov.basis_hash},
                     {"source", prov.source},
                     {"code_version", prov.code_version}};
  j["payload"] = std::move(payload);
  return j;
}

namespace {

// Non-finite values are left out so every emitted number is finite.
void put(json& j, const char* key, double v) {
  if (std::isfinite(v)) j[key] = v;
}

json energies(const std::map<std::string, double>& m) {
  json j = json::object();
  for (const auto& [k, v] : m) put(j, k.c_str(), v);
  return j;
}

}  // namespace

json to_json(const norms::NormReport& r) {
  json j;
  j["n_orb"] = r.n_orb;
  put(j, "lambda_constant", r.constant);
  put(j, "lambda_one_body", r.one_body);
  put(j, "lambda_two_body", r.two_body);
  put(j, "lambda_effective", r.effective());
  put(j, "lambda_total", r.total());
  return j;
}

json to_json(const norms::DFFactorization& df) {
  json j;
  j["rank"] = df.rank;
  j["route"] = df.dense_route ? "dense" : "cholesky";
  put(j, "lambda_one_body", df.one_body_norm);
  put(j, "lambda_two_body", df.two_body_norm);
  put(j, "lambda_df", df.lambda());
  if (df.reconstruction_error >= 0) put(j, "reconstruction_error", df.reconstruction_error);
  json leaves = json::array();
  for (const auto& leaf : df.leaves) leaves.push_back(leaf.weights.cwiseAbs().sum());
  j["leaf_l1_norms"] = leaves;
  return j;
}

json to_json(const norms::ResourceEstimate& r) {
  json j;
  put(j, "lambda", r.lambda);
  put(j, "epsilon", r.epsilon);
  j["walk_calls"] = r.walk_calls;
  j["block_encoding_cost"] = r.block_encoding_cost;
  return j;
}

json to_json(const fno::FnoReport& r) {
  json j;
  j["source_basis"] = r.source_basis;
  j["reference_basis"] = r.reference_basis;
  j["method_requested"] = r.method_requested;
  j["method_used"] = r.method_used;
  j["n_source"] = r.n_source;
  j["n_reference"] = r.n_reference;
  j["n_kept"] = r.n_kept;
  j["df_rank_reference"] = r.df_rank_reference;
  j["df_rank_kept"] = r.df_rank_kept;
  put(j, "lambda_reference", r.lambda_reference);
  put(j, "lambda_kept", r.lambda_kept);
  put(j, "norm_improvement_percent", r.norm_improvement_percent);
  put(j, "orbital_reduction_percent", r.orbital_reduction_percent);
  put(j, "e_hf_reference", r.e_hf_reference);
  put(j, "e_hf_source", r.e_hf_source);
  put(j, "e_corr_reference", r.e_corr_reference);
  put(j, "e_corr_kept", r.e_corr_kept);
  put(j, "tolerance", r.tolerance);
  put(j, "last_kept_occupation", r.last_kept_occupation);
  json search = json::array();
  for (const auto& [k, e] : r.search) search.push_back({{"kept_virtuals", k}, {"e_corr", e}});
  j["search"] = search;
  return j;
}

json to_json(const basisopt::OptimizationResult& r) {
  json j;
  j["basis"] = r.basis.name();
  j["termination"] = r.trace.termination;
  j["evaluations"] = r.trace.evaluations;
  j["rejected"] = r.trace.rejected;
  j["best_index"] = r.trace.best;
  put(j, "initial_energy", r.initial.energy);
  put(j, "initial_lambda", r.initial.lambda);
  put(j, "initial_g", r.initial.g);
  put(j, "best_energy", r.best.energy);
  put(j, "best_lambda", r.best.lambda);
  put(j, "best_g", r.best.g);
  json pts = json::array();
  for (const auto& p : r.trace.points) {
    json q;
    q["iteration"] = p.iteration;
    q["theta"] = p.theta;
    put(q, "energy", p.energy);
    put(q, "lambda", p.lambda);
    put(q, "g", p.g);
    pts.push_back(q);
  }
  j["trace"] = pts;
  return j;
}

namespace {

json scan_point(const basisopt::ScanPoint& p) {
  json q;
  put(q, "exponent", p.exponent);
  q["n_orb"] = p.n_orb;
  q["ok"] = p.ok;
  q["linear_dependent"] = p.linear_dependent;
  put(q, "min_overlap_eigenvalue", p.min_overlap_eigenvalue);
  if (p.ok) {
    put(q, "lambda_sparse", p.lambda_sparse);
    put(q, "lambda_df", p.lambda_df);
    put(q, "e_hf", p.e_hf);
    put(q, "e_fci", p.e_fci);
  } else {
    q["error"] = p.error;
  }
  return q;
}

}  // namespace

json to_json(const basisopt::ScanTable& t) {
  json j;
  j["element"] = t.element;
  j["l"] = t.l;
  j["unaugmented"] = scan_point(t.unaugmented);
  json pts = json::array();
  for (const auto& p : t.points) pts.push_back(scan_point(p));
  j["points"] = pts;
  return j;
}

json to_json(const basisopt::ScalingFit& f) {
  json j;
  json pts = json::array();
  for (const auto& p : f.points) {
    json q;
    q["basis"] = p.basis;
    q["n_orb"] = p.n_orb;
    put(q, "lambda_df", p.lambda_df);
    put(q, "lambda_sparse", p.lambda_sparse);
    pts.push_back(q);
  }
  j["points"] = pts;
  put(j, "exponent", f.exponent);
  put(j, "prefactor", f.prefactor);
  return j;
}

json to_json(const std::vector<fno::ScanRow>& rows) {
  json arr = json::array();
  for (const auto& r : rows) {
    json q;
    put(q, "bond_angstrom", r.bond_angstrom);
    q["basis"] = r.basis;
    put(q, "threshold", r.threshold);
    q["ok"] = r.ok;
    if (r.ok) {
      q["n_total"] = r.n_total;
      q["n_kept"] = r.n_kept;
      put(q, "lambda_df", r.lambda_df);
      put(q, "e_hf", r.e_hf);
      q["e_corr"] = energies(r.e_corr);
      put(q, "last_kept_occupation", r.last_kept_occupation);
    } else {
      q["error"] = r.error;
    }
    arr.push_back(q);
  }
  return {{"rows", arr}};
}

json to_json(const std::vector<basisopt::TransferRow>& rows) {
  json arr = json::array();
  for (const auto& r : rows) {
    json q;
    q["name"] = r.name;
    q["n_orb"] = r.n_orb;
    q["ok"] = r.ok;
    if (r.ok) {
      q["e_reference"] = energies(r.e_reference);
      q["e_optimized"] = energies(r.e_optimized);
      q["delta"] = energies(r.delta);
      put(q, "lambda_reference", r.lambda_reference);
      put(q, "lambda_optimized", r.lambda_optimized);
      put(q, "improvement_percent", r.improvement_percent);
    } else {
      q["error"] = r.error;
    }
    arr.push_back(q);
  }
  return {{"rows", arr}};
}

namespace {

const std::map<std::string, std::vector<std::string>>& required_payload() {
  static const std::map<std::string, std::vector<std::string>> r = {
      {"norm", {"sparse", "df"}},        {"df", {"df", "convergence"}}, {"fno", {"fno"}},
      {"optimize", {"stages"}},          {"scan", {"scan"}},            {"scaling", {"scaling"}},
      {"n2-demo", {"rows"}},             {"transfer", {"rows"}},
  };
  return r;
}

void check_numbers(const json& j, const std::string& path, std::vector<std::string>& out) {
  if (j.is_number_float()) {
    if (!std::isfinite(j.get<double>())) out.push_back(path + ": non-finite number");
  } else if (j.is_null()) {
    out.push_back(path + ": null value");
  } else if (j.is_object()) {
    for (const auto& [k, v] : j.items()) check_numbers(v, path + "." + k, out);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) check_numbers(j[i], path + "[" + std::to_string(i) + "]", out);
  }
}

}  // namespace

std::vector<std::string> validate_report(const json& r) {
  std::vector<std::string> out;
  if (!r.is_object()) return {"report is not a JSON object"};
  if (!r.contains("schema_version") || !r["schema_version"].is_number_integer())
    out.push_back("missing integer schema_version");
  else if (r["schema_version"].get<int>() != kSchemaVersion)
    out.push_back("unsupported schema_version " + std::to_string(r["schema_version"].get<int>()));
  if (!r.contains("provenance") || !r["provenance"].is_object()) {
    out.push_back("missing provenance block");
  } else {
    for (const char* k : {"geometry_hash", "basis_hash", "source", "code_version"})
      if (!r["provenance"].contains(k) || !r["provenance"][k].is_string())
        out.push_back(std::string("provenance.") + k + " missing");
  }
  std::string kind;
  if (!r.contains("kind") || !r["kind"].is_string()) {
    out.push_back("missing kind");
  } else {
    kind = r["kind"].get<std::string>();
    if (!required_payload().count(kind)) out.push_back("unknown kind '" + kind + "'");
  }
  if (!r.contains("payload") || !r["payload"].is_object()) {
    out.push_back("missing payload object");
  } else {
    if (auto it = required_payload().find(kind); it != required_payload().end())
      for (const auto& k : it->second)
        if (!r["payload"].contains(k)) out.push_back("payload." + k + " missing");
    check_numbers(r["payload"], "payload", out);
  }
  return out;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::string format_number(double v) {
  if (!std::isfinite(v)) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string format_csv(const CsvTable& t) {
  auto line = [](const std::vector<std::string>& cells) {
    std::string s;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) s += ',';
      const bool quote = cells[i].find_first_of(",\"\n") != std::string::npos;
      if (!quote) {
        s += cells[i];
        continue;
      }
      s += '"';
      for (char c : cells[i]) s += c == '"' ? std::string("\"\"") : std::string(1, c);
      s += '"';
    }
    return s + "\n";
  };
  std::string out = line(t.header);
  for (const auto& r : t.rows) out += line(r);
  return out;
}

CsvTable dissociation_csv(const std::vector<fno::ScanRow>& rows) {
  std::set<std::string> methods;
  for (const auto& r : rows)
    for (const auto& [m, e] : r.e_corr) methods.insert(m);
  CsvTable t;
  t.header = {"bond_angstrom", "basis", "threshold", "n_total", "n_kept", "lambda_df", "e_hf"};
  for (const auto& m : methods) t.header.push_back("e_corr_" + m);
  t.header.push_back("last_kept_occupation");
  t.header.push_back("status");
  for (const auto& r : rows) {
    std::vector<std::string> c = {format_number(r.bond_angstrom), r.basis, format_number(r.threshold)};
    if (r.ok) {
      c.insert(c.end(), {std::to_string(r.n_total), std::to_string(r.n_kept), format_number(r.lambda_df),
                         format_number(r.e_hf)});
      for (const auto& m : methods) {
        auto it = r.e_corr.find(m);
        c.push_back(it == r.e_corr.end() ? "" : format_number(it->second));
      }
      c.push_back(format_number(r.last_kept_occupation));
      c.push_back("ok");
    } else {
      c.insert(c.end(), 4 + methods.size() + 1, "");
      c.push_back("failed: " + r.error);
    }
    t.rows.push_back(std::move(c));
  }
  return t;
}

CsvTable scan_csv(const basisopt::ScanTable& t) {
  CsvTable c;
  c.header = {"exponent", "n_orb", "lambda_sparse", "lambda_df", "e_hf", "e_fci", "min_overlap_eigenvalue", "status"};
  auto row = [](const basisopt::ScanPoint& p, const std::string& alpha) {
    std::vector<std::string> r = {alpha, std::to_string(p.n_orb)};
    if (p.ok) {
      for (double v : {p.lambda_sparse, p.lambda_df, p.e_hf, p.e_fci}) r.push_back(format_number(v));
    } else {
      r.insert(r.end(), 4, "");
    }
    r.push_back(format_number(p.min_overlap_eigenvalue));
    r.push_back(p.ok ? "ok" : (p.linear_dependent ? "linear_dependent" : "failed: " + p.error));
    return r;
  };
  c.rows.push_back(row(t.unaugmented, "none"));
  for (const auto& p : t.points) c.rows.push_back(row(p, format_number(p.exponent)));
  return c;
}

CsvTable scaling_csv(const basisopt::ScalingFit& f) {
  CsvTable c;
  c.header = {"basis", "n_orb", "lambda_df", "lambda_sparse"};
  for (const auto& p : f.points)
    c.rows.push_back({p.basis, std::to_string(p.n_orb), format_number(p.lambda_df), format_number(p.lambda_sparse)});
  return c;
}

CsvTable trace_csv(const basisopt::OptimizationTrace& t) {
  CsvTable c;
  c.header = {"iteration", "energy", "lambda", "g"};
  const std::size_t n = t.points.empty() ? 0 : t.points.front().theta.size();
  for (std::size_t i = 0; i < n; ++i) c.header.push_back("theta_" + std::to_string(i));
  for (const auto& p : t.points) {
    std::vector<std::string> r = {std::to_string(p.iteration), format_number(p.energy), format_number(p.lambda),
                                  format_number(p.g)};
    for (double v : p.theta) r.push_back(format_number(v));
    c.rows.push_back(std::move(r));
  }
  return c;
}

CsvTable transfer_csv(const std::vector<basisopt::TransferRow>& rows) {
  std::set<std::string> methods;
  for (const auto& r : rows)
    for (const auto& [m, e] : r.delta) methods.insert(m);
  CsvTable c;
  c.header = {"name", "n_orb", "lambda_reference", "lambda_optimized", "improvement_percent"};
  for (const auto& m : methods) c.header.push_back("delta_" + m);
  c.header.push_back("status");
  for (const auto& r : rows) {
    std::vector<std::string> cells = {r.name, std::to_string(r.n_orb)};
    if (r.ok) {
      for (double v : {r.lambda_reference, r.lambda_optimized, r.improvement_percent})
        cells.push_back(format_number(v));
      for (const auto& m : methods) {
        auto it = r.delta.find(m);
        cells.push_back(it == r.delta.end() ? "" : format_number(it->second));
      }
      cells.push_back("ok");
    } else {
      cells.insert(cells.end(), 3 + methods.size(), "");
      cells.push_back("failed: " + r.error);
    }
    c.rows.push_back(std::move(cells));
  }
  return c;
}

void write_text(const std::filesystem::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  const auto tmp = std::filesystem::path(path.string() + ".tmp");
  {
    std::ofstream f(tmp, std::ios::binary);
    if (!f) fail(ErrorKind::Io, "cannot open " + tmp.string() + " for writing");
    f << content;
    if (!f) fail(ErrorKind::Io, "write to " + tmp.string() + " failed");
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) fail(ErrorKind::Io, "cannot move report into place at " + path.string() + ": " + ec.message());
}

}  // namespace qpecost::report
