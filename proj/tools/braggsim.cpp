// braggsim command-line front end.
#include "braggsim/scenario.hpp"

#include "CLI11.hpp"

#include <iostream>

using namespace braggsim;

int main(int argc, char** argv) {
  CLI::App app{"Bragg-waveguide pump filter and four-wave-mixing pair source simulator"};
  app.require_subcommand(1);

  std::string config = "configs/paper.json";
  std::string out_dir;
  std::string format;
  std::size_t points = 0;
  double rejection_db = 0.0;
  bool force = false, quiet = false;

  const std::pair<const char*, const char*> subs[] = {
      {"spectrum", "transmission spectrum and stopband metrics"},
      {"design", "number of periods for a target rejection"},
      {"stim-sweep", "stimulated idler power against pump wavelength"},
      {"spont-rate", "spontaneous pair rate from the stimulated relation"},
      {"contrast-sweep", "pair rate against index contrast at fixed rejection"},
      {"jsd", "joint spectral densities and Schmidt purity"},
      {"report", "all of the above into one directory"},
  };
  for (const auto& [name, help] : subs) {
    CLI::App* s = app.add_subcommand(name, help);
    s->add_option("--config", config, "scenario JSON file")->capture_default_str();
    s->add_option("--out", out_dir, "output directory (default <output.dir>/<subcommand>)");
    s->add_option("--format", format, "table format")->check(CLI::IsMember({"csv", "json"}));
    s->add_flag("--force", force, "overwrite existing output files");
    s->add_flag("--quiet", quiet, "print nothing on success");
    if (std::string(name) != "design" && std::string(name) != "report")
      s->add_option("--points", points, "sweep points or JSD grid points per axis")->check(CLI::Range(2, 100000));
    if (std::string(name) == "design") s->add_option("--rejection-db", rejection_db, "target rejection in dB");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  RunRequest req;
  req.config_path = config;
  req.subcommand = *parse_subcommand(app.get_subcommands().front()->get_name());
  req.force = force;
  if (!out_dir.empty()) req.out_dir = out_dir;
  if (!format.empty()) req.options.format = format == "json" ? OutputFormat::Json : OutputFormat::Csv;
  if (points > 0) req.options.points = points;
  CLI::App* sub = app.get_subcommands().front();
  if (sub->get_name() == "design" && sub->count("--rejection-db")) req.options.rejection_db = rejection_db;

  const RunStatus st = run_scenario_files(req);
  if (st.exit_code != kExitOk) {
    std::cerr << "braggsim: " << st.error << "\n";
    return st.exit_code;
  }
  for (const auto& w : st.warnings) std::cerr << "warning: " << w << "\n";
  if (!quiet) {
    for (const auto& m : st.messages) std::cout << m << "\n";
    std::cout << "wrote " << st.written.size() << " files to " << st.out_dir << "\n";
  }
  return kExitOk;
}
