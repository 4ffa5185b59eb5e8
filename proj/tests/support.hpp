#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "carleman/pipeline.hpp"

namespace test {

inline std::string config_text(const std::string& name) {
  std::ifstream in(std::string(CONFIG_DIR) + "/" + name + ".json");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline nlohmann::json config(const std::string& name) { return nlohmann::json::parse(config_text(name)); }

inline std::unique_ptr<carleman::Pipeline> pipeline(const nlohmann::json& doc) {
  return carleman::build_pipeline(carleman::parse_run_config(doc));
}

inline std::unique_ptr<carleman::Pipeline> pipeline(const char* name) { return pipeline(config(name)); }

inline carleman::CMatrix dense(const carleman::SparseC& m) { return carleman::CMatrix(m); }

// Shared default wavelet; building one takes about a second.
inline const carleman::MotherWavelet& wavelet() {
  static auto w = carleman::shared_wavelet(carleman::WaveletOptions{});
  return *w;
}

}  // namespace test
