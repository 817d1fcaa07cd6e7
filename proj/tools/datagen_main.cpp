// korm-datagen: writes the bundled synthetic datasets (plus their schema
// files) so the CLI and benchmarks can be exercised without external data.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "korm/synth.hpp"

namespace {

void write_text(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"generate the bundled synthetic datasets"};
  std::string dataset = "all";
  std::string out_dir = "data";
  std::uint64_t seed = 7;
  app.add_option("dataset", dataset, "abalone | tae | all");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--seed", seed, "generator seed");
  CLI11_PARSE(app, argc, argv);

  std::filesystem::create_directories(out_dir);
  const auto path = [&](const std::string& name) { return out_dir + "/" + name; };

  if (dataset == "abalone" || dataset == "all") {
    korm::synth::write_csv_file(korm::synth::make_abalone_like(seed), path("abalone_synth.csv"));
    write_text(path("abalone_synth.schema"), korm::synth::abalone_schema_text);
    std::cout << path("abalone_synth.csv") << " (4177 rows)\n";
  }
  if (dataset == "tae" || dataset == "all") {
    korm::synth::write_csv_file(korm::synth::make_tae_like(seed), path("tae_synth.csv"));
    write_text(path("tae_synth.schema"), korm::synth::tae_schema_text);
    std::cout << path("tae_synth.csv") << " (151 rows)\n";
  }
  if (dataset != "abalone" && dataset != "tae" && dataset != "all") {
    std::cerr << "unknown dataset: " << dataset << "\n";
    return 2;
  }
  return 0;
}
