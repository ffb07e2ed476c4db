#pragma once

#include <string>

#include "gfi/graph.hpp"

namespace gfi {

/// Build once, then apply to any number of fields. Implementations are
/// immutable after construction and may be shared across threads.
class FieldIntegrator {
 public:
  virtual ~FieldIntegrator() = default;

  /// Integrated field, one row per vertex.
  virtual VertexField apply(const VertexField& field) const = 0;
  virtual int num_vertices() const = 0;
  virtual std::string name() const = 0;

  /// Wall-clock time spent in the constructor.
  double preprocess_ms() const { return preprocess_ms_; }

 protected:
  double preprocess_ms_ = 0.0;
};

}  // namespace gfi
