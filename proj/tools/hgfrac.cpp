// hgfrac: batch verification runs for the fractional integral operators on
// the Heisenberg group.
//
//   hgfrac <command> [--config file.json] [--key value ...]
//
// Flags override top-level config keys (flag name = key name); values parse
// as JSON when possible and as strings otherwise. Exit codes: 0 all checks
// pass, 1 some check flagged, 2 usage or validation error.

#include <fstream>
#include <iostream>
#include <string>

#include "hg/hg.hpp"

namespace {

const char* kUsage =
    "usage: hgfrac <command> [--config file.json] [--key value ...]\n"
    "commands: kernel-eval homogeneity dominance lambda-bracket apply\n"
    "          classical-hls scaling-fit necessity probe-norm proof-chain\n"
    "          constraints mu-sweep\n"
    "common keys: n mu kernel a b alpha beta theta s p q L N deltas f points\n"
    "             samples seed out cache_dir (see README)\n";

hg::json parse_flag_value(const std::string& raw) {
  try {
    return hg::json::parse(raw);
  } catch (const hg::json::parse_error&) {
    return hg::json(raw);
  }
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << kUsage;
    return 2;
  }
  try {
    hg::json doc = hg::RunConfig::defaults();
    std::vector<std::pair<std::string, std::string>> flags;
    for (int i = 2; i < argc; ++i) {
      std::string flag = argv[i];
      if (flag.rfind("--", 0) != 0 || i + 1 >= argc)
        throw std::invalid_argument("expected --key value pairs after the command");
      flags.emplace_back(flag.substr(2), argv[++i]);
    }
    // Config files first, then flag overrides, regardless of flag order.
    for (const auto& [key, value] : flags) {
      if (key != "config") continue;
      std::ifstream is(value);
      if (!is) throw std::invalid_argument("cannot open config file: " + value);
      hg::json file = hg::json::parse(is);
      for (auto& [k, v] : file.items()) doc[k] = v;
    }
    for (const auto& [key, value] : flags)
      if (key != "config") doc[key] = parse_flag_value(value);
    doc["command"] = std::string(argv[1]);
    return hg::run(hg::RunConfig{std::move(doc)});
  } catch (const std::invalid_argument& e) {
    std::cerr << "hgfrac: " << e.what() << "\n" << kUsage;
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "hgfrac: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "hgfrac: " << e.what() << "\n";
    return 2;
  }
}
