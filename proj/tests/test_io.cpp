#include <pnuc/io.hpp>

#include <gtest/gtest.h>

#include <filesystem>

using namespace pnuc;

TEST(MatrixJson, RoundTrip) {
  Rng rng(3);
  const CMatrix m = random_complex_matrix(3, 2, rng);
  const Json j = matrix_to_json(m);
  EXPECT_EQ(j["rows"], 3);
  EXPECT_EQ(j["entries"].size(), 6u);
  EXPECT_EQ(matrix_from_json(Json::parse(j.dump())), m);  // shortest round-trip doubles
}

TEST(MatrixJson, FlatListAndRealEntries) {
  const CMatrix m = matrix_from_json(Json::parse("[[1,0],[0,2],3,[4,-1]]"));
  ASSERT_EQ(m.rows(), 2);
  EXPECT_EQ(m(0, 1), cplx(0, 2));
  EXPECT_EQ(m(1, 0), cplx(3, 0));
  EXPECT_EQ(m(1, 1), cplx(4, -1));
}

TEST(MatrixJson, Malformed) {
  for (const char* bad : {R"({"rows":2,"cols":2,"entries":[[1,0]]})", R"({"rows":0,"cols":1,"entries":[]})",
                          R"({"rows":1,"cols":1,"entries":[[1,2,3]]})", R"({"cols":1,"entries":[[1,0]]})",
                          R"([[1,0],[2,0],[3,0]])", R"("matrix")", R"({"rows":1,"cols":1,"entries":[["a",0]]})"})
    EXPECT_THROW(matrix_from_json(Json::parse(bad)), InputError) << bad;
}

TEST(GroupJson, FormsAndShorthands) {
  EXPECT_EQ(*group_from_json(Json::parse(R"({"type":"cyclic","n":12})")).order(), 12);
  EXPECT_EQ(*parse_group("dihedral:4").order(), 8);
  EXPECT_FALSE(parse_group("integers").is_finite());
  EXPECT_EQ(parse_group("z_window:5").window_radius(), 5);
  const Group t = group_from_json(Json::parse(R"({"type":"table","mult":[[0,1],[1,0]]})"));
  EXPECT_EQ(*t.order(), 2);
  EXPECT_EQ(group_to_json(parse_group("cyclic:3"))["n"], 3);
  EXPECT_EQ(*group_from_json(group_to_json(parse_group("dihedral:3"))).order(), 6);
}

TEST(GroupJson, Malformed) {
  for (const char* bad : {"cyclic", "cyclic:x", "cyclic:3x", "torus:3", "cyclic:0", "integers:2"})
    EXPECT_THROW(parse_group(bad), InputError) << bad;
  EXPECT_THROW(group_from_json(Json::parse(R"({"type":"table","mult":[[0,1],[1,1]]})")), InputError);
  EXPECT_THROW(group_from_json(Json::parse(R"({"n":3})")), InputError);
}

TEST(ElementJson, RoundTrip) {
  const Group g = parse_group("cyclic:4");
  Rng rng(7);
  CcElement f = CcElement::delta(0, random_complex_matrix(2, 2, rng));
  f.add(3, random_complex_matrix(2, 2, rng));
  const CcElement back = cc_from_json(Json::parse(cc_to_json(f, g).dump()), g);
  EXPECT_EQ(back.support(), f.support());
  for (Element s : f.support()) EXPECT_EQ(back.coefficient(s), f.coefficient(s));
}

TEST(ElementJson, FileLayouts) {
  const Json single = Json::parse(R"({"group":"cyclic:3","coeffs":[{"s":1,"matrix":[[1,0]]}]})");
  const ElementFile a = elements_from_json(single, std::nullopt);
  ASSERT_EQ(a.elements.size(), 1u);
  EXPECT_EQ(a.elements[0].id, "f0");
  EXPECT_EQ(*a.group->order(), 3);

  const Json wrapped = Json::parse(
      R"({"group":{"type":"cyclic","n":5},"elements":[{"id":"u","coeffs":[{"s":1,"matrix":[[1,0]]}]},
                                                     {"coeffs":[{"s":0,"matrix":[[2,0]]}]}]})");
  const ElementFile b = elements_from_json(wrapped, std::nullopt);
  ASSERT_EQ(b.elements.size(), 2u);
  EXPECT_EQ(b.elements[0].id, "u");
  EXPECT_EQ(b.elements[1].id, "f1");
  EXPECT_EQ(b.elements[1].f.coefficient(0)(0, 0), cplx(2.0));

  const Json bare = Json::parse(R"([{"coeffs":[{"s":-2,"matrix":[[1,0]]}]}])");
  EXPECT_THROW(elements_from_json(bare, std::nullopt), InputError);
  EXPECT_EQ(elements_from_json(bare, parse_group("integers")).elements[0].f.support(), (std::vector<Element>{-2}));
}

TEST(ElementJson, Malformed) {
  const Group g = parse_group("cyclic:3");
  for (const char* bad : {R"({"coeffs":[]})", R"({"coeffs":[{"s":7,"matrix":[[1,0]]}]})",
                          R"({"coeffs":[{"s":0,"matrix":[[1,0]]},{"s":1,"matrix":[[1,0],[0,0],[0,0],[1,0]]}]})",
                          R"({"coeffs":[{"s":0.5,"matrix":[[1,0]]}]})", R"({"coeffs":[{"matrix":[[1,0]]}]})",
                          R"({"coeffs":[{"s":0,"matrix":{"rows":1,"cols":2,"entries":[[1,0],[1,0]]}}]})"})
    EXPECT_THROW(cc_from_json(Json::parse(bad), g), InputError) << bad;
}

TEST(Reports, ExponentAndPNorm) {
  EXPECT_EQ(exponent_to_json(PExponent::infinity()), "inf");
  EXPECT_EQ(exponent_to_json(PExponent(1.5)), 1.5);
  const CMatrix d = (CMatrix(2, 2) << 2, 0, 0, 1).finished();
  const Json j = pnorm_to_json(pnorm_estimate(d, PExponent(3)), PExponent(3));
  EXPECT_EQ(j["value"], 2.0);
  EXPECT_EQ(j["converged"], true);
  EXPECT_EQ(j["witness"].size(), 2u);
}

TEST(Reports, WitnessIsDeterministic) {
  const Group z3 = parse_group("cyclic:3");
  const CrossedSystem sys(z3, ConcreteAlgebra::full(1), IsometricAction::trivial(z3, 1));
  const std::vector<NamedElement> fs = {{"u", CcElement::delta(1, CMatrix::Identity(1, 1))}};
  const std::string a = witness_to_json(crossed_nuclearity_witness(fs, 0.5, sys, PExponent(3)).report).dump();
  const std::string b = witness_to_json(crossed_nuclearity_witness(fs, 0.5, sys, PExponent(3)).report).dump();
  EXPECT_EQ(a, b);
  const Json j = Json::parse(a);
  EXPECT_EQ(j["passed"], true);
  EXPECT_EQ(j["folner"]["members"].size(), 3u);
}

TEST(Files, ReadAndWrite) {
  const auto dir = std::filesystem::temp_directory_path() / "pnuc_io_test";
  std::filesystem::remove_all(dir);
  const auto path = dir / "nested" / "m.json";
  write_text_file(path, matrix_to_json(CMatrix::Identity(2, 2)).dump());
  EXPECT_EQ(matrix_from_json(read_json_file(path)), CMatrix::Identity(2, 2));
  write_text_file(dir / "broken.json", "{oops");
  EXPECT_THROW(read_json_file(dir / "broken.json"), InputError);
  EXPECT_THROW(read_json_file(dir / "absent.json"), InputError);
  std::filesystem::remove_all(dir);
}
