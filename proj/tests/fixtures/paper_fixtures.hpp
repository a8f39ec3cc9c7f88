#pragma once

// Published arithmetic fixtures: regression coefficients and validation rows
// as printed, used as oracles for the prediction pipeline.

#include <string>
#include <vector>

namespace fixtures {

inline std::string published_profile_path() {
    return std::string(FIXTURE_DIR) + "/published_profile.json";
}

// Two-stage validation summary rows: (actual RS, predicted RS) in seconds.
struct RsPair {
    double actual;
    double predicted;
};

inline const std::vector<RsPair>& validation1_mm() {
    static const std::vector<RsPair> rows = {
        {6.06, 5.53},   {6.24, 6.48},   {7.99, 7.77},   {8.25, 8.16},   {8.72, 8.46},
        {11.02, 11.27}, {11.83, 11.76}, {11.65, 12.21}, {14.51, 15.22}, {17.72, 17.86},
        {17.27, 18.11}, {16.71, 18.58}, {18.09, 18.93}, {19.41, 20.02}, {21.72, 20.94},
        {23.64, 23.54}, {24.15, 24.18}, {24.34, 24.79}, {24.37, 24.92}, {24.48, 24.95},
    };
    return rows;
}

// printed summary for the rows above: MAPE %, MPE %, RMSE s, R^2
inline constexpr double kValidation1MmMape = 3.34;
inline constexpr double kValidation1MmMpe = -1.30;
inline constexpr double kValidation1MmRmse = 0.63;
inline constexpr double kValidation1MmR2 = 0.99;

// Three-stage M/G scenario-1 rows: the second-stage-equivalent thetas and
// arrival counts are the inputs; the instruction-reduction columns and the
// predicted savings are the printed outputs.
struct MgScenario1Row {
    double rho_s3, rho_s4;
    double n3, n4;
    double theta_s3, theta_s4;
    double theta_s3_quantum, theta_s4_quantum;  // print precision of the theta columns
    double ibar_s3, ibar_s4, ibar_total;
    double predicted_rs;
    double actual_rs;
};

inline const std::vector<MgScenario1Row>& mg_scenario1() {
    static const std::vector<MgScenario1Row> rows = {
        {0.21, 0.31, 17998, 26928, 9.16, 9.29, 0.005, 0.005, 128864, 196304, 325168, 1.11, 1.076},
        {0.23, 0.35, 20238, 30395, 9.19, 9.34, 0.005, 0.005, 145585, 223030, 368615, 1.25, 1.317},
        {0.24, 0.35, 20617, 30906, 9.20, 9.35, 0.005, 0.005, 148427, 226990, 375417, 1.27, 1.318},
        {0.28, 0.41, 24158, 36295, 9.25, 9.42, 0.005, 0.005, 175164, 269144, 444308, 1.49, 1.579},
        {0.29, 0.44, 25710, 38553, 9.27, 9.44, 0.005, 0.005, 186978, 286998, 473976, 1.59, 1.640},
        {0.29, 0.44, 25800, 38742, 9.27, 9.45, 0.005, 0.005, 187670, 288495, 476165, 1.60, 1.715},
        {0.30, 0.45, 26120, 39192, 9.28, 9.45, 0.005, 0.005, 190114, 292060, 482174, 1.62, 1.675},
        {0.34, 0.51, 29603, 44394, 9.33, 9.52, 0.005, 0.005, 216896, 333661, 550556, 1.84, 1.782},
        {0.35, 0.52, 30462, 45803, 9.34, 9.53, 0.005, 0.005, 223550, 344991, 568541, 1.90, 1.927},
        {0.35, 0.53, 30804, 46130, 9.34, 9.54, 0.005, 0.005, 226202, 347624, 573826, 1.92, 2.092},
        {0.36, 0.53, 31186, 46712, 9.349, 9.54, 0.0005, 0.005, 229169, 352327, 581496, 1.94, 1.936},
        {0.40, 0.60, 34850, 52312, 9.40, 9.61, 0.005, 0.005, 257780, 397864, 655644, 2.19, 2.332},
        {0.40, 0.60, 35147, 52746, 9.40, 9.61, 0.005, 0.005, 260112, 401416, 661529, 2.21, 2.299},
        {0.51, 0.76, 44565, 66903, 9.52, 9.75, 0.005, 0.005, 335030, 518586, 853616, 2.86, 3.043},
        {0.51, 0.76, 44657, 66920, 9.52, 9.75, 0.005, 0.005, 335767, 518727, 854494, 2.87, 2.991},
        {0.51, 0.77, 45024, 67526, 9.52, 9.76, 0.005, 0.005, 338708, 523804, 862512, 2.89, 3.051},
        {0.55, 0.83, 48116, 72297, 9.56, 9.80, 0.005, 0.005, 363706, 563817, 927523, 3.12, 3.327},
        {0.57, 0.85, 49535, 74445, 9.58, 9.82, 0.005, 0.005, 375224, 581893, 957117, 3.22, 3.495},
    };
    return rows;
}

// M/M scenario-1 rows (appendix): instruction reductions and predicted
// savings, all printed values.
struct RniRow {
    double rni_s3, rni_s4, total;
    double predicted_rs;
};

inline const std::vector<RniRow>& mm_scenario1() {
    static const std::vector<RniRow> rows = {
        {153023, 230286, 383309, 1.44}, {177166, 266492, 443657, 1.68},
        {193574, 291328, 484902, 1.84}, {201393, 302979, 504372, 1.92},
        {225897, 339800, 565697, 2.16}, {233992, 352290, 586282, 2.24},
        {241978, 364497, 606475, 2.32}, {249932, 377682, 627613, 2.40},
        {258370, 389153, 647523, 2.48}, {262702, 395840, 658542, 2.52},
        {260991, 392598, 653590, 2.50}, {288626, 435834, 724460, 2.78},
        {317926, 479028, 796953, 3.06}, {339713, 512475, 852189, 3.27},
        {352228, 530929, 883157, 3.39}, {368462, 554774, 923236, 3.55},
        {380328, 574038, 954366, 3.67},
    };
    return rows;
}

// G/G scenario-1 rows (appendix): the totals are printed in units of 1e4.
struct GgRow {
    double rni_s3, rni_s4;
    double total_1e4;
    double predicted_rs;
};

inline const std::vector<GgRow>& gg_scenario1() {
    static const std::vector<GgRow> rows = {
        {158471, 237751, 39.62, 1.38}, {174204, 261182, 43.54, 1.51},
        {182086, 272834, 45.49, 1.57}, {192758, 289429, 48.22, 1.66},
        {194589, 291384, 48.60, 1.67}, {210728, 318443, 52.92, 1.82},
        {218132, 330068, 54.82, 1.88}, {218992, 330342, 54.93, 1.88},
        {219841, 333409, 55.33, 1.90}, {236501, 359469, 59.60, 2.04},
        {240700, 366844, 60.75, 2.07}, {241699, 368532, 61.02, 2.08},
        {243667, 372162, 61.58, 2.10}, {260945, 401028, 66.20, 2.25},
        {262716, 403213, 66.59, 2.27}, {306242, 483054, 78.93, 2.67},
        {306564, 484136, 79.07, 2.68}, {308359, 486893, 79.53, 2.69},
        {322335, 515298, 83.76, 2.83}, {329852, 527576, 85.74, 2.90},
    };
    return rows;
}

}  // namespace fixtures
