#pragma once

#include <string>

#include "rbpca/eval.hpp"
#include "rbpca/stream_monitor.hpp"

namespace rbpca {

struct LoadedModel {
  AnyModel model;
  RunConfig config;
};

// Versioned JSON model file. Numbers round-trip exactly, so a loaded model
// reproduces the in-memory Q values bit for bit.
void save_model(const std::string& path, const AnyModel& model, const RunConfig& config);

LoadedModel load_model(const std::string& path);

}  // namespace rbpca
