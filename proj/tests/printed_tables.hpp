#pragma once

// Holdout tables for 20-25 October 2020 as printed, with the printed means.

#include <string>
#include <vector>

namespace printed {

struct Row {
    double real;
    double smoothing;
    double prediction;
    double error_percent;
};

struct Table {
    std::string region;
    std::vector<Row> rows;
    double mean_percent;
};

inline const std::vector<Table>& tables() {
    static const std::vector<Table> all{
        {"Czechia",
         {{11984, 11173, 10730, 3.96}, {14969, 11710, 11161, 4.68}, {14150, 12030, 11564, 3.87},
          {15258, 12689, 11934, 5.95}, {12474, 12830, 12269, 4.37}, {7300, 12295, 12564, 2.18}},
         4.17},
        {"Germany",
         {{8523, 9472, 8346, 11.88}, {12331, 10019, 8763, 12.53}, {5952, 9861, 9164, 7.06},
          {22236, 10105, 9545, 5.54}, {8688, 10421, 9902, 4.98}, {2900, 9944, 10231, 2.88}},
         7.48},
        {"Italy",
         {{10871, 13322, 13000, 2.41}, {15199, 14567, 14080, 3.34}, {16078, 15934, 15203, 4.58},
          {19143, 17034, 16364, 3.93}, {19640, 18266, 17557, 3.88}, {21273, 19033, 18777, 1.34}},
         3.25},
    };
    return all;
}

}  // namespace printed
