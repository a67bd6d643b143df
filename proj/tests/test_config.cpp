#include <cstdio>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "nambu/config.hpp"
#include "nambu/report.hpp"
#include "nambu/verify.hpp"

using namespace nambu;

TEST_CASE("k ranges") {
  CHECK(parse_k_range("8:32:4") == std::vector<int>{8, 12, 16, 20, 24, 28, 32});
  CHECK(parse_k_range("2:6") == std::vector<int>{2, 3, 4, 5, 6});
  CHECK(parse_k_range("8,12,16") == std::vector<int>{8, 12, 16});
  CHECK(parse_k_range("5") == std::vector<int>{5});
  CHECK_THROWS_AS(parse_k_range("8:4"), UsageError);
  CHECK_THROWS_AS(parse_k_range("8:32:0"), UsageError);
  CHECK_THROWS_AS(parse_k_range("a:b"), UsageError);
  CHECK_THROWS_AS(parse_k_range("0,4"), UsageError);
}

TEST_CASE("config round-trips through JSON") {
  RunConfig c;
  c.geometry = "t4-r2";
  c.theorems = {"hyp_fourfn", "nambu_commute_n2"};
  c.ks = {4, 6, 8};
  c.seeds = {7, 11};
  c.symbols = {"cos1", "random:3:2", R"([{"m":[1,0,0,0],"re":0.5,"im":-0.25}])", "one"};
  c.grid = 64;
  c.norm_tol = 3.5e-11;
  c.max_iter = 321;
  c.output_dir = "out dir";
  c.workers = 3;
  const nlohmann::json j = c;
  CHECK(j.get<RunConfig>() == c);
  CHECK(nlohmann::json::parse(j.dump()).get<RunConfig>() == c);

  const auto path = (std::filesystem::temp_directory_path() / "nambu_cfg_test.json").string();
  save_config(path, c);
  CHECK(load_config(path) == c);
  std::filesystem::remove(path);

  CHECK(nlohmann::json::parse(R"({"ks": "8:16:4"})").get<RunConfig>().ks == std::vector<int>{8, 12, 16});
  CHECK_THROWS_AS(nlohmann::json::parse(R"({"kz": [1]})").get<RunConfig>(), UsageError);
}

TEST_CASE("symbol specs") {
  CHECK(parse_symbol_spec("cos1", 2) == preset_symbol("cos1", 2));
  CHECK(parse_symbol_spec("random:5", 4) == random_symbol(5, 4, 2, true));
  CHECK(parse_symbol_spec("random:5:1", 2) == random_symbol(5, 2, 1, true));
  const auto f = parse_symbol_spec(R"([{"m":[1,-2],"re":0.5},{"m":[0,0],"re":1,"im":2}])", 2);
  CHECK(f.coeff(Freq{1, -2}) == cplx(0.5, 0.0));
  CHECK(f.coeff(Freq{}) == cplx(1.0, 2.0));

  const auto path = (std::filesystem::temp_directory_path() / "nambu_sym_test.json").string();
  std::ofstream(path) << R"([{"m":[0,1],"re":1}])" << "\n";
  CHECK(parse_symbol_spec("@" + path, 2) == FourierSymbol::monomial(2, Freq{0, 1}));
  std::filesystem::remove(path);

  CHECK_THROWS_AS(parse_symbol_spec("bogus", 2), UsageError);
  CHECK_THROWS_AS(parse_symbol_spec("cos3", 2), UsageError);
  CHECK_THROWS_AS(parse_symbol_spec(R"([{"m":[1],"re":1}])", 2), UsageError);
  CHECK_THROWS_AS(parse_symbol_spec("[{", 2), UsageError);
  CHECK_THROWS_AS(parse_symbol_spec("random:x", 2), UsageError);
  CHECK_THROWS_AS(parse_symbol_spec("@/no/such/file", 2), UsageError);
}

TEST_CASE("verify plans") {
  RunConfig c;
  c.theorems = {"bt_commutator"};
  c.geometry = "t2";
  c.ks = parse_k_range("8:32:4");
  auto plan = plan_verify(c);
  CHECK(plan.size() == 3);
  CHECK(plan[0].ks.size() == 7);

  c.geometry = "t4";
  c.ks.clear();
  c.theorems = {"hyp_fourfn", "tensor_W"};
  plan = plan_verify(c);
  REQUIRE(plan.size() == 12);  // three structures x three seeds, then three tensor tuples
  CHECK(plan[0].r == 1);
  CHECK(plan[8].r == 3);
  CHECK(plan[9].r == 0);
  CHECK(plan[9].ks == std::vector<int>{2, 3, 4, 5, 6});

  c.theorems = {"volform_n1"};
  CHECK_THROWS_AS(plan_verify(c), UsageError);
  c.theorems = {"not_a_theorem"};
  CHECK_THROWS_AS(plan_verify(c), UsageError);
  c.theorems = {"bt_product"};
  c.geometry = "t2";
  c.symbols = {"cos1"};
  CHECK_THROWS_AS(plan_verify(c), UsageError);  // needs two symbols
  c.symbols = {"cos1", "sin2"};
  CHECK(plan_verify(c).size() == 1);

  RunConfig whole;
  whole.geometry = "t2";
  for (const auto& p : plan_verify(whole)) CHECK(p.geometry == "t2");
}

TEST_CASE("verify is deterministic and its CSV round-trips") {
  RunConfig c;
  c.geometry = "t2";
  c.theorems = {"bt_product", "bt_commutator"};
  c.ks = {4, 6, 8, 10, 12};
  c.seeds = {5};
  const auto plan = plan_verify(c);
  const auto a = run_verify(c, plan);
  c.workers = 3;
  const auto b = run_verify(c, plan);
  const std::string csv = residual_csv(a.series);
  CHECK(csv == residual_csv(b.series));
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 11);

  const auto back = read_residual_csv(csv);
  REQUIRE(back.size() == a.series.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    CHECK(back[i].pass == a.series[i].pass);
    CHECK(back[i].fit.slope == doctest::Approx(a.series[i].fit.slope).epsilon(1e-8));
  }
  CHECK_THROWS_AS(read_residual_csv("not,a,csv\n"), Error);

  const std::string svg = rate_svg("bt_product", a.series);
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("<line") != std::string::npos);
}
