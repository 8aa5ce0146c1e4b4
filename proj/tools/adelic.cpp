#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "adelic/cli.hpp"
#include "json.hpp"

namespace {

// A map JSON object, or an array of maps (expression strings or objects).
std::vector<std::string> read_maps(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  const nlohmann::json j = nlohmann::json::parse(buf.str());
  std::vector<std::string> out;
  auto add = [&](const nlohmann::json& m) {
    if (m.is_string())
      out.push_back(m.get<std::string>());
    else if (m.is_object())
      out.push_back(m.dump());
    else
      throw std::runtime_error(path + ": maps must be strings or objects");
  };
  if (j.is_array())
    for (const auto& m : j) add(m);
  else
    add(j);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace adelic::cli;
  CLI::App app{"Adelic energies, heights and canonical measures of rational maps"};
  app.set_version_flag("--version", kVersion);

  RunConfig config;
  std::string command, format = "json", in_file;
  std::vector<std::string> args;
  int depth = 0, threads = 0;

  app.add_option("command", command, "norm | az | height | map-info | verify | quad-selftest")
      ->required()
      ->check(CLI::IsMember(commands()));
  app.add_option("args", args, "map expressions (use -- before arguments starting with '-')");
  app.add_option("--tol", config.tol, "target tolerance for heights and pairings")->capture_default_str();
  app.add_option("--depth", depth, "enclosure depth (default: by degree)");
  app.add_option("--samples", config.samples, "Monte Carlo samples")->capture_default_str();
  app.add_option("--seed", config.seed, "random seed")->capture_default_str();
  app.add_option("--period-max", config.period_max, "largest period for small points")->capture_default_str();
  app.add_option("--telescope-max", config.telescope_max, "canonical height telescoping steps")
      ->capture_default_str();
  app.add_option("--format", format, "output format")->check(CLI::IsMember({"json", "text"}))->capture_default_str();
  app.add_option("--threads", threads, "worker threads (output does not depend on it)");
  app.add_option("--in", in_file, "JSON file with a map or an array of maps, used before positional maps");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (app.count("--depth")) config.depth = depth;
  if (app.count("--threads")) config.threads = threads;
  config.format = format == "text" ? Format::Text : Format::Json;
  if (!in_file.empty()) {
    try {
      std::vector<std::string> maps = read_maps(in_file);
      maps.insert(maps.end(), args.begin(), args.end());
      args = std::move(maps);
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kExitUsage;
    }
  }

  const RunOutput out = run(command, args, config);
  std::cout << out.out;
  std::cerr << out.err;
  return out.exit_code;
}
