#include "qpecost/basisopt/augment.hpp"
#include "qpecost/basisopt/optimize.hpp"
#include "qpecost/basisopt/scan.hpp"
#include "qpecost/basisopt/transfer.hpp"
#include "qpecost/fno/pipeline.hpp"
#include "qpecost/hamiltonian/fcidump.hpp"
#include "qpecost/integrals/cache.hpp"
#include "qpecost/norms/double_factorization.hpp"
#include "qpecost/norms/resource.hpp"
#include "qpecost/norms/sparse_norm.hpp"
#include "qpecost/report/report.hpp"
#include "qpecost/scf/mo_transform.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace qpecost;
using report::json;

namespace {

enum Exit : int {
  kOk = 0,
  kUnknown = 1,
  kParse = 2,
  kConvergence = 3,
  kCapacity = 4,
  kIo = 5,
  kInput = 6,
};

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Parse:
      return kParse;
    case ErrorKind::Convergence:
      return kConvergence;
    case ErrorKind::Capacity:
      return kCapacity;
    case ErrorKind::Io:
      return kIo;
    case ErrorKind::Input:
    case ErrorKind::Numerical:
      return kInput;
  }
  return kUnknown;
}

constexpr const char* kExitTable =
    "Exit codes: 0 ok, 1 unexpected failure, 2 parse error (flags, XYZ, basis, FCIDUMP, report),\n"
    "3 SCF/Davidson non-convergence, 4 size cap exceeded, 5 I/O error, 6 invalid input or numerical failure.";

struct Common {
  std::string geometry;
  std::string basis;
  std::string h_basis;
  std::string fcidump;
  int charge = 0;
  std::string out = ".";
  std::string data_dir;
  std::string cache_dir;
  int jobs = 1;
  double ratio = 5.0;
};

fs::path data_dir(const Common& c) {
  if (!c.data_dir.empty()) return c.data_dir;
  if (const char* env = std::getenv("QPECOST_DATA")) return env;
  return QPECOST_DATA_DIR;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char ch) { return std::tolower(ch); });
  return s;
}

fs::path resolve(const Common& c, const std::string& name, const char* sub, const char* ext) {
  if (fs::exists(name)) return name;
  const auto p = data_dir(c) / sub / (lower(name) + ext);
  if (fs::exists(p)) return p;
  fail(ErrorKind::Io, std::string("cannot find ") + sub + " '" + name + "'");
}

chem::Molecule load_molecule(const Common& c, const std::string& name) {
  return chem::load_geometry(resolve(c, name, "geometries", ".xyz"), c.charge);
}

chem::BasisSet load_basis(const Common& c, const std::string& name) {
  auto b = chem::load_basis(resolve(c, name, "basis", ".json"));
  b.set_name(lower(fs::path(name).stem().string()));
  return b;
}

chem::BasisSet molecule_basis(const Common& c) {
  auto b = load_basis(c, c.basis);
  if (!c.h_basis.empty()) {
    b = chem::with_elements_from(b, load_basis(c, c.h_basis), {"H"});
    b.set_name(b.name() + "/H:" + lower(c.h_basis));
  }
  return b;
}

integrals::IntegralOptions int_options(const Common& c) {
  integrals::IntegralOptions o;
  o.jobs = c.jobs;
  return o;
}

void require_molecular(const Common& c) {
  if (c.geometry.empty() || c.basis.empty()) fail(ErrorKind::Input, "--geometry and --basis are required");
  if (!c.fcidump.empty()) fail(ErrorKind::Input, "--fcidump cannot be combined with --geometry/--basis");
}

struct Source {
  hamiltonian::MOHamiltonian ham;
  report::Provenance prov;
};

Source load_source(const Common& c) {
  const bool mol = !c.geometry.empty() || !c.basis.empty();
  if (mol == !c.fcidump.empty())
    fail(ErrorKind::Input, "give exactly one integral source: --fcidump or --geometry with --basis");
  if (!mol) {
    std::ifstream f(c.fcidump, std::ios::binary);
    if (!f) fail(ErrorKind::Io, "cannot open FCIDUMP " + c.fcidump);
    std::stringstream ss;
    ss << f.rdbuf();
    return {hamiltonian::parse_fcidump(ss.str()), report::provenance(c.fcidump, ss.str())};
  }
  require_molecular(c);
  const auto m = load_molecule(c, c.geometry);
  const auto b = molecule_basis(c);
  const auto ints = integrals::cached_integrals(m, b, c.cache_dir, int_options(c));
  const auto scf = scf::run_rhf(m, b, ints);
  return {scf::transform_to_mo(ints, scf), report::provenance(m, b)};
}

void emit(const Common& c, const std::string& stem, const json& rep, const report::CsvTable* csv = nullptr) {
  const auto problems = report::validate_report(rep);
  if (!problems.empty()) fail(ErrorKind::Numerical, "report failed schema check: " + problems.front());
  const fs::path dir = c.out;
  report::write_text(dir / (stem + ".json"), report::dump(rep));
  if (csv) report::write_text(dir / (stem + ".csv"), report::format_csv(*csv));
  std::cout << (dir / (stem + ".json")).string() << "\n";
}

std::vector<correlation::EnergyMethod> parse_methods(const std::vector<std::string>& names) {
  std::vector<correlation::EnergyMethod> out;
  for (const auto& n : names) out.push_back(correlation::parse_energy_method(n));
  return out;
}

int parse_shell(const std::string& s) {
  static const std::string letters = "spdf";
  const auto pos = letters.find(lower(s));
  if (s.size() != 1 || pos == std::string::npos) fail(ErrorKind::Parse, "shell must be one of s, p, d, f");
  return static_cast<int>(pos);
}

// ---- subcommands ----

void run_norm(const Common& c, double epsilon, const std::string& fcidump_out) {
  const auto src = load_source(c);
  const auto sparse = norms::sparse_norm(src.ham);
  const int rank = fno::df_rank(src.ham.n_orb(), c.ratio);
  const auto df = norms::df_factorize(src.ham, rank);
  json payload;
  payload["sparse"] = report::to_json(sparse);
  payload["df"] = report::to_json(df);
  payload["resource"] = report::to_json(norms::resource_estimate(df.lambda(), epsilon, src.ham.n_orb(), rank));
  if (!fcidump_out.empty()) hamiltonian::write_fcidump(src.ham, fcidump_out);
  emit(c, "norm", report::make_report("norm", src.prov, payload));
}

void run_df(const Common& c, std::vector<double> ratios) {
  const auto src = load_source(c);
  const int n = src.ham.n_orb();
  std::vector<int> ranks;
  for (double r : ratios) ranks.push_back(fno::df_rank(n, r));
  ranks.push_back(n * n);
  std::sort(ranks.begin(), ranks.end());
  ranks.erase(std::unique(ranks.begin(), ranks.end()), ranks.end());

  json conv = json::array();
  report::CsvTable csv;
  csv.header = {"rank", "lambda_df", "lambda_one_body", "lambda_two_body", "reconstruction_error"};
  for (int r : ranks) {
    const auto df = norms::df_factorize(src.ham, r);
    conv.push_back(report::to_json(df));
    csv.rows.push_back({std::to_string(r), report::format_number(df.lambda()),
                        report::format_number(df.one_body_norm), report::format_number(df.two_body_norm),
                        report::format_number(df.reconstruction_error)});
  }
  json payload;
  payload["df"] = report::to_json(norms::df_factorize(src.ham, fno::df_rank(n, c.ratio)));
  payload["convergence"] = conv;
  emit(c, "df", report::make_report("df", src.prov, payload), &csv);
}

struct FnoArgs {
  std::string reference;
  double threshold = -1.0;
  int keep = -1;
  bool keep_all = false;
  double tolerance = 1e-3;
  std::string method = "CISD";
};

void run_fno(const Common& c, const FnoArgs& a) {
  require_molecular(c);
  const auto mol = load_molecule(c, c.geometry);
  const auto basis = molecule_basis(c);
  const auto method = correlation::parse_energy_method(a.method);
  fno::PipelineOptions opts;
  opts.integrals = int_options(c);
  opts.df_ratio = c.ratio;
  opts.cache_dir = c.cache_dir;

  const int selectors = (a.threshold >= 0) + (a.keep >= 0) + a.keep_all;
  if (selectors > 1) fail(ErrorKind::Input, "choose at most one of --threshold, --keep, --keep-all");
  fno::FnoReport rep;
  if (selectors == 0) {
    const auto ref = a.reference.empty() ? basis : load_basis(c, a.reference);
    rep = fno::fno_comparison_report(mol, basis, ref, method, a.tolerance, opts);
  } else {
    if (!a.reference.empty()) fail(ErrorKind::Input, "--reference applies only to energy matching");
    const fno::FnoPipeline pipe(mol, basis, opts);
    const auto crit = a.keep_all       ? fno::FnoCriterion::count(pipe.n_virt())
                      : a.keep >= 0    ? fno::FnoCriterion::count(a.keep)
                                       : fno::FnoCriterion::occupation(a.threshold);
    rep = fno::truncation_report(pipe, fno::select_truncation(pipe, crit), method);
  }
  json payload;
  payload["fno"] = report::to_json(rep);
  emit(c, "fno", report::make_report("fno", report::provenance(mol, basis), payload));
}

struct OptimizeArgs {
  std::string element = "F";
  std::vector<std::string> shells = {"d"};
  std::string donor = "ano-pvdz";
  double weight = 0.1;
  double gamma = -1.0;
  std::string method = "CISD";
  int max_iter = 100;
  std::string basis_out;
};

void run_optimize(const Common& c, const OptimizeArgs& a) {
  require_molecular(c);
  basisopt::OptimizationConfig cfg;
  cfg.molecule = load_molecule(c, c.geometry);
  const auto base = molecule_basis(c);
  const auto donor = load_basis(c, a.donor);
  cfg.method = correlation::parse_energy_method(a.method);
  cfg.max_iter = a.max_iter;
  cfg.df_ratio = c.ratio;
  cfg.integrals = int_options(c);

  chem::BasisSet aug = base;
  for (const auto& s : a.shells) aug = basisopt::init_augmented(aug, donor, a.element, parse_shell(s)).basis;
  // Shell indices can move while augmenting; masks come from the final basis.
  std::vector<std::vector<chem::ParameterSlot>> stages;
  for (const auto& s : a.shells) {
    const int l = parse_shell(s);
    const auto& shells = aug.shells(a.element);
    const auto it = std::find_if(shells.begin(), shells.end(), [&](const auto& sh) { return sh.l() == l; });
    stages.push_back(chem::shell_slots(aug, a.element, static_cast<int>(it - shells.begin())));
  }
  cfg.basis = aug;
  cfg.start = chem::read_parameters(aug, stages.front());

  if (a.gamma >= 0) {
    cfg.gamma = a.gamma;
  } else {
    const auto ints = integrals::compute_integrals(cfg.molecule, base, cfg.integrals);
    const auto ham = scf::transform_to_mo(ints, scf::run_rhf(cfg.molecule, base, ints));
    cfg.gamma = basisopt::gamma_from_reference(a.weight, fno::df_lambda(ham, c.ratio));
  }

  const auto results = basisopt::optimize_stages(cfg, stages);
  json stages_json = json::array();
  report::CsvTable csv;
  for (std::size_t i = 0; i < results.size(); ++i) {
    auto j = report::to_json(results[i]);
    j["shell"] = a.shells[i];
    stages_json.push_back(j);
    auto t = report::trace_csv(results[i].trace);
    if (csv.header.empty()) csv.header = {"stage"};
    if (csv.header.size() < t.header.size() + 1) {
      csv.header = {"stage"};
      csv.header.insert(csv.header.end(), t.header.begin(), t.header.end());
    }
    for (auto& row : t.rows) {
      row.insert(row.begin(), a.shells[i]);
      csv.rows.push_back(std::move(row));
    }
  }
  json payload;
  payload["gamma"] = cfg.gamma;
  payload["method"] = a.method;
  payload["stages"] = stages_json;
  auto out = results.back().basis;
  out.set_name(base.name() + "-opt");
  emit(c, "optimize", report::make_report("optimize", report::provenance(cfg.molecule, base), payload), &csv);
  const fs::path basis_path = a.basis_out.empty() ? fs::path(c.out) / "optimized_basis.json" : fs::path(a.basis_out);
  report::write_text(basis_path, chem::serialize_basis(out));
}

struct ScanArgs {
  std::string element = "O";
  std::string shell = "s";
  double lo = 0.01, hi = 100.0;
  int points = 21;
  std::vector<std::string> scaling;
  bool no_fci = false;
};

void run_scan(const Common& c, const ScanArgs& a) {
  if (c.geometry.empty()) fail(ErrorKind::Input, "--geometry is required");
  const auto mol = load_molecule(c, c.geometry);
  basisopt::ScanOptions opts;
  opts.integrals = int_options(c);
  opts.df_ratio = c.ratio;
  opts.with_fci = !a.no_fci;
  if (!a.scaling.empty()) {
    std::vector<chem::BasisSet> bases;
    for (const auto& b : a.scaling) bases.push_back(load_basis(c, b));
    const auto fit = basisopt::lambda_scaling(mol, bases, opts);
    json payload;
    payload["scaling"] = report::to_json(fit);
    const auto csv = report::scaling_csv(fit);
    emit(c, "scaling", report::make_report("scaling", report::provenance(mol, bases.front()), payload), &csv);
    return;
  }
  if (c.basis.empty()) fail(ErrorKind::Input, "--basis is required");
  const auto basis = molecule_basis(c);
  const auto table = basisopt::scan_augmented_primitive(mol, basis, a.element, parse_shell(a.shell),
                                                        basisopt::log_grid(a.lo, a.hi, a.points), opts);
  json payload;
  payload["scan"] = report::to_json(table);
  const auto csv = report::scan_csv(table);
  emit(c, "scan", report::make_report("scan", report::provenance(mol, basis), payload), &csv);
}

struct DemoArgs {
  std::vector<double> bonds = {0.9, 1.1, 1.3, 1.5, 1.7, 1.9, 2.1, 2.3, 2.5};
  std::string dz = "cc-pvdz";
  double dz_threshold = 1e-4;
  std::string tz = "cc-pvtz";
  double tz_threshold = 1e-3;
  std::vector<std::string> methods = {"MP2", "CISD"};
};

int run_demo(const Common& c, const DemoArgs& a) {
  fno::DissociationConfig cfg;
  cfg.bonds_angstrom = a.bonds;
  cfg.bases = {{load_basis(c, a.dz), a.dz_threshold}, {load_basis(c, a.tz), a.tz_threshold}};
  cfg.methods = parse_methods(a.methods);
  cfg.options.integrals = int_options(c);
  cfg.options.df_ratio = c.ratio;
  cfg.options.cache_dir = c.cache_dir;
  const auto rows = fno::dissociation_scan(cfg);
  const auto csv = report::dissociation_csv(rows);
  report::Provenance prov{"", report::hex(cfg.bases.front().first.hash() ^ cfg.bases.back().first.hash()),
                          "N2 " + a.dz + "/" + a.tz, QPECOST_VERSION};
  emit(c, "n2_demo", report::make_report("n2-demo", prov, report::to_json(rows)), &csv);
  return std::all_of(rows.begin(), rows.end(), [](const auto& r) { return r.ok; }) ? kOk : kConvergence;
}

struct TransferArgs {
  std::string optimized;
  std::string reference;
  std::vector<std::string> molecules;
  std::vector<std::string> methods = {"HF", "MP2", "CISD"};
};

void run_transfer(const Common& c, const TransferArgs& a) {
  const auto opt = load_basis(c, a.optimized);
  const auto ref = load_basis(c, a.reference);
  std::vector<std::pair<std::string, chem::Molecule>> mols;
  for (const auto& m : a.molecules) mols.emplace_back(m, load_molecule(c, m));
  basisopt::TransferOptions opts;
  opts.methods = parse_methods(a.methods);
  opts.integrals = int_options(c);
  opts.df_ratio = c.ratio;
  const auto rows = basisopt::transfer_evaluate(opt, mols, ref, opts);
  const auto csv = report::transfer_csv(rows);
  report::Provenance prov{"", report::hex(opt.hash()), opt.name() + " vs " + ref.name(), QPECOST_VERSION};
  emit(c, "transfer", report::make_report("transfer", prov, report::to_json(rows)), &csv);
}

int run_validate(const std::vector<std::string>& files) {
  int status = kOk;
  for (const auto& f : files) {
    std::ifstream in(f);
    if (!in) {
      std::cerr << f << ": cannot open\n";
      status = kIo;
      continue;
    }
    json j;
    try {
      j = json::parse(in);
    } catch (const json::exception& e) {
      std::cerr << f << ": " << e.what() << "\n";
      status = kParse;
      continue;
    }
    const auto problems = report::validate_report(j);
    for (const auto& p : problems) std::cerr << f << ": " << p << "\n";
    if (!problems.empty() && status == kOk) status = kParse;
    if (problems.empty()) std::cout << f << ": ok\n";
  }
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hamiltonian 1-norm and QPE cost toolkit: norms, double factorization, FNO truncation, basis optimization"};
  app.footer(kExitTable);
  app.set_config("--config", "", "TOML/INI file whose keys mirror the flags; flags win");
  app.require_subcommand(1);

  Common c;
  auto add_common = [&](CLI::App* s, bool fcidump) {
    s->add_option("--geometry,-g", c.geometry, "XYZ file or shipped geometry name (h2o, nh3, ...)");
    s->add_option("--basis,-b", c.basis, "basis JSON file or shipped name (cc-pvdz, ...)");
    s->add_option("--h-basis", c.h_basis, "separate basis for hydrogen");
    if (fcidump) s->add_option("--fcidump", c.fcidump, "FCIDUMP integral source");
    s->add_option("--charge", c.charge, "net molecular charge");
  };
  app.add_option("--out,-o", c.out, "output directory")->capture_default_str();
  app.add_option("--data-dir", c.data_dir, "shipped data directory");
  app.add_option("--cache-dir", c.cache_dir, "integral cache directory");
  app.add_option("--jobs,-j", c.jobs, "worker threads for integrals")->check(CLI::PositiveNumber);
  app.add_option("--df-ratio", c.ratio, "N_DF / N")->capture_default_str()->check(CLI::PositiveNumber);

  auto* norm = app.add_subcommand("norm", "sparse and DF 1-norms with a QPE cost estimate");
  add_common(norm, true);
  double epsilon = 1.6e-3;
  std::string fcidump_out;
  norm->add_option("--epsilon", epsilon, "target phase-estimation accuracy (Ha)")->capture_default_str();
  norm->add_option("--write-fcidump", fcidump_out, "also write the MO Hamiltonian as FCIDUMP");

  auto* df = app.add_subcommand("df", "double-factorization diagnostics over ranks");
  add_common(df, true);
  std::vector<double> ratios = {1, 2, 3, 4, 5, 6, 7};
  df->add_option("--ratios", ratios, "N_DF / N values to tabulate (N^2 is always added)");

  auto* fno_cmd = app.add_subcommand("fno", "frozen-natural-orbital truncation and report");
  add_common(fno_cmd, false);
  FnoArgs fa;
  fno_cmd->add_option("--reference", fa.reference, "reference basis for energy matching (default: --basis)");
  fno_cmd->add_option("--threshold", fa.threshold, "keep NOs with occupation >= threshold");
  fno_cmd->add_option("--keep", fa.keep, "keep this many virtual NOs");
  fno_cmd->add_flag("--keep-all", fa.keep_all, "keep every virtual NO");
  fno_cmd->add_option("--tolerance", fa.tolerance, "energy-match tolerance (Ha)")->capture_default_str();
  fno_cmd->add_option("--method", fa.method, "proxy correlation method (MP2, CISD, FCI)")->capture_default_str();

  auto* opt = app.add_subcommand("optimize", "augment and optimize one element's d/f shells");
  add_common(opt, false);
  OptimizeArgs oa;
  opt->add_option("--element", oa.element)->capture_default_str();
  opt->add_option("--shells", oa.shells, "shells to augment, optimized in this order")->capture_default_str();
  opt->add_option("--donor", oa.donor, "basis supplying the extra exponents")->capture_default_str();
  opt->add_option("--weight", oa.weight, "gamma in units of 1/lambda of the start basis")->capture_default_str();
  opt->add_option("--gamma", oa.gamma, "absolute gamma in [0, 1]; overrides --weight");
  opt->add_option("--method", oa.method, "energy term (CISD, MP2)")->capture_default_str();
  opt->add_option("--max-iter", oa.max_iter)->capture_default_str()->check(CLI::PositiveNumber);
  opt->add_option("--basis-out", oa.basis_out, "where to write the optimized basis JSON");

  auto* scan = app.add_subcommand("scan", "extra-primitive exponent scan, or lambda-vs-N scaling");
  add_common(scan, false);
  ScanArgs sa;
  scan->add_option("--element", sa.element)->capture_default_str();
  scan->add_option("--shell", sa.shell, "s or p")->capture_default_str();
  scan->add_option("--min", sa.lo)->capture_default_str();
  scan->add_option("--max", sa.hi)->capture_default_str();
  scan->add_option("--points", sa.points)->capture_default_str();
  scan->add_option("--scaling", sa.scaling, "bases for a lambda-vs-N fit instead of an exponent scan");
  scan->add_flag("--no-fci", sa.no_fci);

  auto* demo = app.add_subcommand("n2-demo", "N2 bond-length scan with FNO truncation");
  DemoArgs da;
  demo->add_option("--bonds", da.bonds, "bond lengths in Angstrom")->capture_default_str();
  demo->add_option("--dz-basis", da.dz)->capture_default_str();
  demo->add_option("--dz-threshold", da.dz_threshold)->capture_default_str();
  demo->add_option("--tz-basis", da.tz)->capture_default_str();
  demo->add_option("--tz-threshold", da.tz_threshold)->capture_default_str();
  demo->add_option("--methods", da.methods)->capture_default_str();

  auto* transfer = app.add_subcommand("transfer", "compare an optimized basis against its reference");
  TransferArgs ta;
  transfer->add_option("--optimized", ta.optimized)->required();
  transfer->add_option("--reference", ta.reference)->required();
  transfer->add_option("--molecules", ta.molecules)->required();
  transfer->add_option("--methods", ta.methods)->capture_default_str();

  auto* validate = app.add_subcommand("validate", "schema-check report files");
  std::vector<std::string> files;
  validate->add_option("files", files)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kParse;
  }

  try {
    if (*norm) run_norm(c, epsilon, fcidump_out);
    else if (*df) run_df(c, ratios);
    else if (*fno_cmd) run_fno(c, fa);
    else if (*opt) run_optimize(c, oa);
    else if (*scan) run_scan(c, sa);
    else if (*demo) return run_demo(c, da);
    else if (*transfer) run_transfer(c, ta);
    else if (*validate) return run_validate(files);
    return kOk;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "unexpected failure: " << e.what() << "\n";
    return kUnknown;
  }
}
