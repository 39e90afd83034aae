#include "ssalt/fixtures.hpp"

#include "ssalt/error.hpp"

namespace ssalt::fixtures {

namespace {

const RawRow kTable3Tau300[] = {
    {1, 206, 2.9043836},
    {1, 204, 2.2834415},
    {2, 358, 2.0369846},
    {2, 424, 2.2286551},
    {2, 528, 3.3882536},
    {1, 293, 1.0765821},
    {2, 433, 3.4253562},
    {2, 367, 2.7105020},
    {2, 481, 2.7411018},
    {1, 74, 0.4584009},
    {1, 232, 1.4229018},
    {2, 563, 2.0737839},
    {2, 524, 4.6559941},
    {2, 398, 3.0469754},
    {1, 83, 1.1645206},
    {1, 288, 1.5370298},
    {2, 518, 2.8000903},
    {2, 558, 4.4736314},
    {1, 106, 1.3271670},
    {1, 699, 7.4817986},
    {2, 538, 4.5781005},
    {1, 98, 0.3647197},
    {1, 184, 1.5738009},
    {2, 379, 2.8413248},
    {1, 102, 1.1580797},
    {1, 165, 1.6696197},
    {2, 584, 3.6045384},
    {2, 371, 2.4435304},
    {2, 538, 4.4705936},
    {2, 303, 2.8150623},
};
const RawRow kTable3Tau400[] = {
    {1, 125, 1.3302026},
    {1, 347, 2.0791452},
    {2, 409, 2.8987105},
    {3, 700, 4.3707818},
    {1, 321, 4.2948213},
    {2, 664, 5.1428573},
    {2, 413, 2.1084361},
    {2, 575, 3.8347019},
    {3, 700, 4.3353895},
    {1, 61, 1.4195226},
    {2, 443, 4.7402742},
    {1, 74, 0.9594538},
    {3, 700, 6.6440064},
    {2, 439, 2.2434726},
    {2, 543, 3.6592403},
    {3, 700, 3.9542721},
    {1, 238, 0.4759539},
    {1, 104, 1.2579545},
    {2, 413, 2.6969144},
    {2, 429, 1.5348759},
    {1, 231, 0.9987282},
    {1, 205, 2.1099217},
    {3, 700, 6.1866970},
    {1, 146, 1.8776734},
    {3, 700, 4.6567010},
    {1, 375, 1.5709192},
    {2, 541, 2.8358232},
    {2, 600, 4.1900476},
    {2, 623, 3.8115301},
    {1, 274, 2.0937201},
};
const RawRow kTable3Tau500[] = {
    {1, 72, 0.8630739},
    {3, 700, 5.7413420},
    {1, 257, 0.5140461},
    {2, 627, 3.7818455},
    {1, 265, 2.5664485},
    {3, 700, 2.3397970},
    {2, 588, 4.4356021},
    {1, 261, 2.2925127},
    {1, 152, 1.5052757},
    {1, 203, 2.2968604},
    {3, 700, 5.2271200},
    {1, 205, 2.4270830},
    {2, 500, 3.9215091},
    {3, 700, 4.2650212},
    {2, 521, 2.0058003},
    {1, 321, 3.1932579},
    {1, 435, 3.1052309},
    {1, 160, 2.6871790},
    {1, 329, 3.0110215},
    {2, 687, 5.7361510},
    {1, 249, 1.9830004},
    {2, 578, 2.8660246},
    {1, 335, 2.4279700},
    {1, 273, 2.3275245},
    {1, 143, 1.3927807},
    {1, 161, 2.3288032},
    {2, 692, 5.5437838},
    {1, 175, 0.7888585},
    {1, 199, 1.0319427},
    {3, 700, 3.1902784},
};
struct CellRow {
  int level = 1;
  double age = 0.0;
  double distortion = 0.0;
};

const CellRow kTable6[] = {
    {2, 573, 4.16}, {2, 447, 2.71}, {1, 365, 2.17}, {2, 412, 3.89},
    {2, 508, 4.22}, {1, 385, 4.14}, {2, 611, 4.66}, {1, 235, 2.53},
    {1, 395, 2.73}, {2, 471, 1.91}, {2, 604, 4.40}, {2, 509, 4.61},
    {2, 653, 2.57}, {1, 341, 3.65}, {2, 441, 2.82}, {1, 392, 3.00},
    {2, 447, 3.05}, {2, 486, 3.33}, {1, 341, 1.82}, {2, 666, 4.02},
    {2, 589, 4.11}, {1, 347, 2.41}, {2, 588, 3.27}, {2, 577, 4.36},
    {2, 567, 2.95}, {2, 468, 2.90}, {2, 564, 3.58}, {2, 435, 1.75},
    {2, 504, 3.95},
};

}  // namespace

ThetaLink table1_theta_star() {
  return {-2.817991, -4996.008, -1.644788, -4995.996,
          0.001729986, 0.0020806801, 0.5893698756};
}

std::array<double, 4> table1_printed_drifts() {
  return {0.002009813, 0.00301472, 0.006496424, 0.009744636};
}

StressPlan example_plan(double tau) {
  return StressPlan::two_level(950.0, 1200.0, 1400.0, tau, 700.0, 1.0);
}

std::vector<RawRow> table3_raw(int tau) {
  switch (tau) {
    case 300:
      return {std::begin(kTable3Tau300), std::end(kTable3Tau300)};
    case 400:
      return {std::begin(kTable3Tau400), std::end(kTable3Tau400)};
    case 500:
      return {std::begin(kTable3Tau500), std::end(kTable3Tau500)};
    default:
      throw DomainError("simulated data exist for tau = 300, 400, 500 only");
  }
}

Dataset table3_dataset(int tau) {
  Dataset data;
  data.plan = example_plan(tau);
  for (const RawRow& row : table3_raw(tau)) {
    if (row.delta == 3) {
      data.observations.push_back(CensoredObs{row.y});
    } else {
      data.observations.push_back(
          FailedObs{piece_of(row.t, data.plan), row.t, row.y});
    }
  }
  data.validate();
  return data;
}

Dataset table6_dataset() {
  Dataset data;
  data.plan = example_plan(400.0);
  for (const CellRow& row : kTable6) {
    data.observations.push_back(FailedObs{row.level, row.age, row.distortion});
  }
  data.validate();
  return data;
}

ThetaNatural section5_estimates(bool sigma_as_variance) {
  ThetaNatural theta;
  theta.mu_x = {0.0005, 0.0007};
  theta.mu_y = {0.0005, 0.0006};
  theta.sigma_x2 = sigma_as_variance ? 0.0011 : 0.0011 * 0.0011;
  theta.sigma_y2 = sigma_as_variance ? 0.0188 : 0.0188 * 0.0188;
  theta.rho = 0.9422;
  return theta;
}

}  // namespace ssalt::fixtures
