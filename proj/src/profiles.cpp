#include "csp/generator.hpp"

namespace csp {

// Sampled (cache_kb, slowdown) tables for the four shipped benchmark
// profiles, normalized to the 2048 KB measurement ceiling. kmeans is the
// cache-sensitive extreme: roughly twice as slow below 256 KB as at 1024 KB.
// The same tables ship as CSV fixtures under data/profiles/.
const std::vector<SlowdownCurve>& benchmark_curves() {
  static const std::vector<SlowdownCurve> curves = {
      SlowdownCurve::from_samples("kmeans", {{64, 1.99},
                                             {128, 1.97},
                                             {256, 1.95},
                                             {512, 1.40},
                                             {1024, 1.02},
                                             {2048, 1.00}}),
      SlowdownCurve::from_samples("sfm", {{64, 1.35},
                                          {128, 1.25},
                                          {256, 1.18},
                                          {512, 1.10},
                                          {1024, 1.04},
                                          {2048, 1.00}}),
      SlowdownCurve::from_samples("letter_recognition", {{64, 1.60},
                                                         {128, 1.45},
                                                         {256, 1.30},
                                                         {512, 1.15},
                                                         {1024, 1.05},
                                                         {2048, 1.00}}),
      SlowdownCurve::from_samples("car_planner", {{64, 1.12},
                                                  {128, 1.09},
                                                  {256, 1.06},
                                                  {512, 1.03},
                                                  {1024, 1.01},
                                                  {2048, 1.00}}),
  };
  return curves;
}

}  // namespace csp
