#pragma once

// Published accuracy rows: (site, keyword, stage, N, n, hits, printed values).

#include <array>
#include <cstddef>
#include <string_view>

namespace radlabel::testing {

struct PublishedRow {
  std::string_view site;
  std::string_view keyword;
  std::string_view stage;
  std::size_t population;
  std::size_t sample;
  std::size_t hits;
  bool interval;  // false: printed as a single point estimate
  double lower;
  double upper;
};

inline constexpr std::array<PublishedRow, 93> kPublishedRows = {{
    {"site1", "atrophy", "nlp", 36296, 31, 25, true, 0.662, 0.951},
    {"site1", "atrophy", "final", 19052, 52, 51, true, 0.942, 1.000},
    {"site1", "calcification", "nlp", 5967, 31, 26, true, 0.704, 0.973},
    {"site1", "calcification", "final", 2935, 33, 33, true, 1.000, 1.000},
    {"site1", "encephalomalacia", "nlp", 2296, 31, 27, true, 0.749, 0.993},
    {"site1", "encephalomalacia", "final", 959, 32, 32, true, 1.000, 1.000},
    {"site1", "hemorrhage", "nlp", 9709, 30, 24, true, 0.651, 0.949},
    {"site1", "hemorrhage", "final", 3678, 33, 31, true, 0.855, 1.000},
    {"site1", "infarct", "nlp", 25205, 30, 25, true, 0.695, 0.972},
    {"site1", "infarct", "final", 9976, 33, 33, true, 1.000, 1.000},
    {"site1", "ischemia", "nlp", 3991, 41, 33, true, 0.679, 0.931},
    {"site1", "ischemia", "final", 2866, 34, 34, true, 1.000, 1.000},
    {"site1", "mass", "nlp", 9548, 30, 20, true, 0.491, 0.842},
    {"site1", "mass", "final", 3959, 33, 33, true, 1.000, 1.000},
    {"site1", "rupture", "nlp", 139, 31, 23, true, 0.600, 0.884},
    {"site1", "rupture", "final", 61, 35, 33, true, 0.890, 0.996},
    {"site1", "atrophy", "nlp", 54679, 30, 23, true, 0.609, 0.924},
    {"site1", "atrophy", "final", 11421, 30, 30, true, 1.000, 1.000},
    {"site2", "calcification", "nlp", 5967, 30, 27, true, 0.789, 1.000},
    {"site2", "calcification", "final", 2800, 30, 30, true, 1.000, 1.000},
    {"site2", "encephalomalacia", "nlp", 4379, 30, 27, true, 0.789, 1.000},
    {"site2", "encephalomalacia", "final", 889, 30, 30, true, 1.000, 1.000},
    {"site2", "hemorrhage", "nlp", 13460, 30, 26, true, 0.740, 0.993},
    {"site2", "hemorrhage", "final", 1396, 51, 48, true, 0.875, 1.000},
    {"site2", "infarct", "nlp", 25205, 30, 23, true, 0.609, 0.924},
    {"site2", "infarct", "final", 6531, 48, 47, true, 0.937, 1.000},
    {"site2", "ischemia", "nlp", 6463, 30, 26, true, 0.740, 0.993},
    {"site2", "ischemia", "final", 1891, 31, 30, true, 0.904, 1.000},
    {"site2", "mass", "nlp", 9548, 30, 24, true, 0.651, 0.949},
    {"site2", "mass", "final", 2648, 47, 44, true, 0.864, 1.000},
    {"site2", "rupture", "nlp", 192, 30, 22, true, 0.582, 0.885},
    {"site2", "rupture", "final", 24, 24, 24, false, 1.000, 1.000},
    {"site1", "acute ischemic event", "final", 2, 2, 1, false, 0.500, 0.500},
    {"site1", "aneurysm", "final", 552, 30, 30, true, 1.000, 1.000},
    {"site1", "atrophy", "final", 19052, 52, 51, true, 0.942, 1.000},
    {"site1", "bleeding", "final", 66, 30, 30, true, 1.000, 1.000},
    {"site1", "calcification", "final", 2935, 33, 33, true, 1.000, 1.000},
    {"site1", "cancer", "final", 3, 3, 3, false, 1.000, 1.000},
    {"site1", "chronic ischemic event", "final", 1, 1, 1, false, 1.000, 1.000},
    {"site1", "cva", "final", 8, 8, 7, false, 0.875, 0.875},
    {"site1", "cystic necrosis", "final", 1, 1, 1, false, 1.000, 1.000},
    {"site1", "dissection", "final", 80, 33, 32, true, 0.923, 1.000},
    {"site1", "encephalomalacia", "final", 959, 32, 32, true, 1.000, 1.000},
    {"site1", "fracture", "final", 903, 34, 33, true, 0.913, 1.000},
    {"site1", "glioblastoma", "final", 19, 19, 18, false, 0.947, 0.947},
    {"site1", "hematoma", "final", 2927, 36, 35, true, 0.917, 1.000},
    {"site1", "hemorrhage", "final", 3678, 33, 31, true, 0.855, 1.000},
    {"site1", "hernia", "final", 62, 33, 33, true, 1.000, 1.000},
    {"site1", "hydrocephalus", "final", 610, 34, 33, true, 0.913, 1.000},
    {"site1", "hygroma", "final", 275, 36, 36, true, 1.000, 1.000},
    {"site1", "infarct", "final", 9976, 33, 33, true, 1.000, 1.000},
    {"site1", "ischemia", "final", 2866, 34, 34, true, 1.000, 1.000},
    {"site1", "ischemic change", "final", 2981, 33, 33, true, 1.000, 1.000},
    {"site1", "malformation", "final", 38, 32, 31, true, 0.943, 0.994},
    {"site1", "mass", "final", 3959, 33, 33, true, 1.000, 1.000},
    {"site1", "meningioma", "final", 1036, 34, 33, true, 0.912, 1.000},
    {"site1", "polyp", "final", 1827, 34, 34, true, 1.000, 1.000},
    {"site1", "polyposis", "final", 547, 32, 32, true, 1.000, 1.000},
    {"site1", "rupture", "final", 61, 35, 33, true, 0.890, 0.996},
    {"site1", "stroke", "final", 109, 32, 19, true, 0.444, 0.743},
    {"site1", "thrombosis", "final", 51, 31, 30, true, 0.927, 1.000},
    {"site1", "thrombus", "final", 181, 34, 33, true, 0.917, 1.000},
    {"site1", "tumor", "final", 127, 42, 39, true, 0.862, 0.995},
    {"site2", "acute ischemic event", "final", 5, 5, 0, false, 0.000, 0.000},
    {"site2", "aneurysm", "final", 185, 30, 30, true, 1.000, 1.000},
    {"site2", "atrophy", "final", 11421, 30, 30, true, 1.000, 1.000},
    {"site2", "bleeding", "final", 32, 32, 29, false, 0.906, 0.906},
    {"site2", "calcification", "final", 2800, 30, 30, true, 1.000, 1.000},
    {"site2", "cancer", "final", 38, 30, 29, true, 0.936, 0.998},
    {"site2", "cva", "final", 17, 17, 8, false, 0.471, 0.471},
    {"site2", "cystic necrosis", "final", 2, 2, 2, false, 1.000, 1.000},
    {"site2", "dissection", "final", 7, 7, 6, false, 0.857, 0.857},
    {"site2", "encephalomalacia", "final", 889, 30, 30, true, 1.000, 1.000},
    {"site2", "fracture", "final", 513, 31, 30, true, 0.905, 1.000},
    {"site2", "glioblastoma", "final", 21, 21, 21, false, 1.000, 1.000},
    {"site2", "hematoma", "final", 2197, 40, 39, true, 0.925, 1.000},
    {"site2", "hemorrhage", "final", 1396, 51, 48, true, 0.875, 1.000},
    {"site2", "hernia", "final", 89, 32, 32, true, 1.000, 1.000},
    {"site2", "hydrocephalus", "final", 377, 30, 30, true, 1.000, 1.000},
    {"site2", "hygroma", "final", 167, 31, 31, true, 1.000, 1.000},
    {"site2", "infarct", "final", 6531, 48, 47, true, 0.937, 1.000},
    {"site2", "ischemia", "final", 1891, 31, 30, true, 0.904, 1.000},
    {"site2", "ischemic change", "final", 4678, 30, 30, true, 1.000, 1.000},
    {"site2", "malformation", "final", 34, 34, 33, false, 0.971, 0.971},
    {"site2", "mass", "final", 2648, 47, 44, true, 0.864, 1.000},
    {"site2", "meningioma", "final", 830, 30, 30, true, 1.000, 1.000},
    {"site2", "polyp", "final", 87, 30, 30, true, 1.000, 1.000},
    {"site2", "polyposis", "final", 3, 3, 3, false, 1.000, 1.000},
    {"site2", "rupture", "final", 24, 24, 24, false, 1.000, 1.000},
    {"site2", "stroke", "final", 122, 30, 24, true, 0.670, 0.930},
    {"site2", "thrombosis", "final", 32, 32, 32, false, 1.000, 1.000},
    {"site2", "thrombus", "final", 92, 31, 30, true, 0.915, 1.000},
    {"site2", "tumor", "final", 114, 34, 33, true, 0.921, 1.000},
}};

}  // namespace radlabel::testing
