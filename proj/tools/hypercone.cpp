#include <filesystem>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "hypercone/report.hpp"

namespace fs = std::filesystem;
using namespace hypercone;

namespace {

struct Flags {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> budget;
  std::optional<double> tol;
  std::string out_dir;
  bool svg = false;
};

void add_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--seed", f.seed, "sampler seed (overrides the request)");
  cmd->add_option("--budget", f.budget, "sample budget per semi-decision (overrides the request)");
  cmd->add_option("--tol", f.tol, "numeric tolerance (overrides the request)");
  cmd->add_option("--out-dir", f.out_dir, "write <name>.report.json, <name>.meta.json and artifacts here");
  cmd->add_flag("--svg", f.svg, "also emit SVG plots");
}

// Runs `file`; with `only` set, restricts the request to that one analysis.
int execute(const std::string& file, const Flags& f, std::optional<Analysis> only) {
  AnalysisRequest r;
  try {
    r = parse_request_file(file);
    if (only) {
      r.analyses = {*only};
      // Re-validate so a missing section is reported the same way as in `analyze`.
      r = parse_request(canonical_json(r));
    }
  } catch (const std::exception& e) {
    std::cerr << file << ": " << e.what() << "\n";
    return 1;
  }
  if (f.seed) r.options.seed = *f.seed;
  if (f.budget) r.options.budget = *f.budget;
  if (f.tol) r.options.tol = *f.tol;

  const ReportBundle b = run(r, f.svg);
  if (f.out_dir.empty()) {
    std::cout << b.report;
  } else {
    const std::string stem = r.name.empty() ? fs::path(file).stem().string() : r.name;
    write_bundle(b, f.out_dir, stem);
    std::cerr << "wrote " << (fs::path(f.out_dir) / (stem + ".report.json")).string() << " and "
              << b.artifacts.size() << " artifact(s)\n";
  }
  for (const auto& [a, msg] : b.errors) std::cerr << "error: " << a << ": " << msg << "\n";
  for (const auto& u : b.undecided) std::cerr << "undecided: " << u << "\n";
  return b.exit_code;
}

int list_examples() {
  const fs::path dir = bundled_requests_dir();
  if (!fs::is_directory(dir)) {
    std::cerr << "no bundled requests at " << dir.string() << " (set HYPERCONE_DATA_DIR)\n";
    return 1;
  }
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.path().extension() == ".json") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  for (const auto& p : files) {
    try {
      const AnalysisRequest r = parse_request_file(p.string());
      std::string analyses;
      for (auto a : r.analyses) analyses += (analyses.empty() ? "" : ",") + to_string(a);
      std::cout << p.filename().string() << "\t" << analyses << "\t" << r.description << "\n";
    } catch (const std::exception& e) {
      std::cout << p.filename().string() << "\tINVALID\t" << e.what() << "\n";
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gevrey-index analysis of hyperbolic principal symbols"};
  app.require_subcommand(1);

  Flags flags;
  std::string file;
  struct Sub {
    const char* name;
    const char* help;
    std::optional<Analysis> only;
  };
  const Sub subs[] = {
      {"analyze", "run every analysis listed in the request", std::nullopt},
      {"flow", "integrate the bicharacteristics of the request's \"flow\" section", Analysis::flow},
      {"sweep", "measure the growth exponent of the request's \"sweep\" model", Analysis::sweep},
      {"weights", "probe the weight functions and root products of the request", Analysis::weights},
  };
  std::vector<std::pair<CLI::App*, std::optional<Analysis>>> cmds;
  for (const auto& s : subs) {
    CLI::App* c = app.add_subcommand(s.name, s.help);
    c->add_option("file", file, "request JSON")->required();
    add_flags(c, flags);
    cmds.emplace_back(c, s.only);
  }
  CLI::App* examples = app.add_subcommand("examples", "list the bundled example requests");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*examples) return list_examples();
    for (auto& [c, only] : cmds)
      if (*c) return execute(file, flags, only);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
