#include <gtest/gtest.h>

#include <clocale>
#include <limits>
#include <random>
#include <sstream>

#include "markovsharp/io.hpp"
#include "support.hpp"

using namespace markovsharp;
using namespace testing_support;

TEST(FormatDouble, ShortestRoundTrip) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(2.0), "2");
  EXPECT_EQ(format_double(-1.5e-300), "-1.5e-300");
  EXPECT_EQ(format_double(kInf), "inf");
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double x = u(gen) * std::pow(10.0, static_cast<int>(gen() % 40) - 20);
    EXPECT_EQ(parse_double(format_double(x)), x);
  }
}

TEST(FormatDouble, IgnoresGlobalLocale) {
  const char* old = std::setlocale(LC_NUMERIC, nullptr);
  const std::string saved = old ? old : "C";
  if (std::setlocale(LC_NUMERIC, "de_DE.UTF-8") == nullptr) GTEST_SKIP() << "de_DE locale unavailable";
  EXPECT_EQ(format_double(1.25), "1.25");
  std::setlocale(LC_NUMERIC, saved.c_str());
}

TEST(ParseDouble, RejectsGarbage) {
  EXPECT_THROW(parse_double("1.0x"), InvalidArgument);
  EXPECT_THROW(parse_double(""), InvalidArgument);
  EXPECT_EQ(parse_double("-inf"), -kInf);
  EXPECT_EQ(parse_double("+2.5"), 2.5);
}

TEST(WeightJson, DefaultsPerFamily) {
  const WeightSpec l = weight_from_json_text(R"({"family": "laguerre", "alpha": 1.5})");
  EXPECT_EQ(l.lower, 0.0);
  EXPECT_EQ(l.upper, kInf);
  EXPECT_EQ(l.alpha, 1.5);
  const WeightSpec h = weight_from_json_text(R"({"family": "hermite"})");
  EXPECT_EQ(h.lower, -kInf);
  const WeightSpec j = weight_from_json_text(R"({"family": "gen_jacobi", "interval": [0, 2], "singularities": [[1, -0.5]]})");
  EXPECT_EQ(j.upper, 2.0);
  ASSERT_EQ(j.singularities.size(), 1u);
  EXPECT_EQ(j.singularities[0].exponent, -0.5);
}

TEST(WeightJson, RoundTrip) {
  for (const WeightSpec& w : {legendre(), jacobi(-0.5, 2.25), laguerre(1.5), hermite(), gen_hermite(2.0, {{0.5, 1.0}}),
                              gen_laguerre(0.0, {{-1.0, 5.0}, {2.0, 1.0}}), gen_jacobi({{0.1, -0.3}}, 0.7, 0.2)}) {
    const WeightSpec back = weight_from_json(to_json(w));
    EXPECT_EQ(back, w) << describe(w);
    EXPECT_EQ(to_json(back).dump(), to_json(w).dump());
  }
}

TEST(WeightJson, InfiniteEndpointsAreStrings) {
  const json j = to_json(hermite());
  EXPECT_EQ(j["interval"][0], "-inf");
  EXPECT_EQ(j["interval"][1], "inf");
}

TEST(WeightJson, InvalidInputs) {
  EXPECT_THROW(weight_from_json_text("not json"), InvalidArgument);
  EXPECT_THROW(weight_from_json_text(R"({"alpha": 1})"), InvalidArgument);
  EXPECT_THROW(weight_from_json_text(R"({"family": "chebyshev"})"), InvalidArgument);
  EXPECT_THROW(weight_from_json_text(R"({"family": "jacobi", "alpha": -1})"), InvalidArgument);
  EXPECT_THROW(weight_from_json_text(R"({"family": "jacobi", "gamma": 1})"), InvalidArgument);
  EXPECT_THROW(weight_from_json_text(R"({"family": "jacobi", "interval": [0]})"), InvalidArgument);
  EXPECT_THROW(weight_from_json_text(R"({"family": "gen_jacobi", "singularities": [[0]]})"), InvalidArgument);
  EXPECT_THROW(weight_from_json_text(R"({"family": "jacobi", "alpha": true})"), InvalidArgument);
}

TEST(Presets, KnownNames) {
  EXPECT_EQ(named_preset("legendre"), legendre());
  EXPECT_EQ(named_preset("chebyshev1"), jacobi(-0.5, -0.5));
  EXPECT_EQ(named_preset("laguerre0"), laguerre(0.0));
  EXPECT_EQ(named_preset("hermite"), hermite());
  EXPECT_THROW(named_preset("chebyshev2"), InvalidArgument);
}

TEST(SharpResultJson, Fields) {
  const SharpResult r = sharp_constant_l2(hermite(), 2);
  const json j = to_json(r, hermite(), SobolevSpec{});
  EXPECT_EQ(j["n"], 2);
  EXPECT_NEAR(j["value"].get<double>(), 2.0, 1e-12);
  EXPECT_EQ(j["coeffs"].size(), 3u);
  EXPECT_EQ(j["weight"]["family"], "hermite");
  EXPECT_TRUE(j["lambdas"].is_array());
  EXPECT_TRUE(j.contains("residual"));
}

TEST(BoundCheckSerialization, JsonAndCsv) {
  std::vector<int> ns{4, 5, 6, 7, 8};
  const BoundCheck c = verify_theorem(CaseId::jacobi_3, legendre(), SobolevSpec{}, ns);
  const json j = to_json(c);
  EXPECT_EQ(j["case_id"], "jacobi_3");
  EXPECT_EQ(j["n_range"].size(), 5u);
  EXPECT_EQ(j["pass"], c.pass);

  std::ostringstream os;
  write_csv(os, c);
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "case_id,n,sharp,predicted_envelope,fitted_constant,fitted_exponent,pass");
  int rows = 0;
  while (std::getline(in, line)) {
    EXPECT_EQ(line.rfind("jacobi_3,", 0), 0u);
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 6);
    ++rows;
  }
  EXPECT_EQ(rows, 5);
}

TEST(RuleCsv, RoundTripIsExact) {
  const QuadRule r = composite_rule(gen_jacobi({{0.3, -0.5}}), 11);
  std::ostringstream os;
  write_csv(os, r);
  std::istringstream in(os.str());
  const QuadRule back = read_rule_csv(in);
  EXPECT_EQ(back.nodes, r.nodes);
  EXPECT_EQ(back.weights, r.weights);
  EXPECT_EQ(back.exactness, r.exactness);
  EXPECT_EQ(back.weight_id, r.weight_id);
}

TEST(RuleCsv, RejectsRowsBeforeHeader) {
  std::istringstream in("0.5,1\n");
  EXPECT_THROW(read_rule_csv(in), InvalidArgument);
}

TEST(Serialization, Deterministic) {
  auto render = [] {
    const MarkovProblem p(gen_jacobi({{0.2, 0.5}}), 10);
    std::ostringstream os;
    os << to_json(p.sharp_sobolev(SobolevSpec{{1.0}}, 10), p.spec(), SobolevSpec{{1.0}}).dump(2);
    write_csv(os, p.sharp_l2(10));
    return os.str();
  };
  EXPECT_EQ(render(), render());
}
