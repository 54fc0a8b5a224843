#include "catmeas_cli/commands.hpp"
#include "catmeas_cli/expr.hpp"
#include "catmeas_cli/model.hpp"
#include "generators.hpp"

#include <gtest/gtest.h>

#include <functional>
#include <set>
#include <sstream>

using namespace catmeas;
using namespace catmeas::cli;
using nlohmann::json;

namespace {

const std::string kReference = std::string(CATMEAS_FIXTURES) + "/reference.json";
const std::string kBroken = std::string(CATMEAS_FIXTURES) + "/broken_cosheaf.json";

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun invoke(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

ModelError model_error(const std::string& text) {
  try {
    parse_model_text(text, "inline.json");
  } catch (const ModelError& e) {
    return e;
  }
  ADD_FAILURE() << "model was accepted";
  return ModelError(ErrorCode::InvalidModel, "", 0, 0, "");
}

void collect_leaves(const json& v, std::vector<std::string>& out) {
  if (v.is_object() || v.is_array()) {
    for (const auto& x : v) collect_leaves(x, out);
  } else {
    out.push_back(v.is_string() ? v.get<std::string>() : v.dump());
  }
}

}  // namespace

TEST(ModelParse, MinimalOneAtomModel) {
  const Model m = parse_model_text(R"({"algebra": {"atoms": ["only"]}})");
  EXPECT_EQ(m.algebra.atom_count(), 1u);
  EXPECT_TRUE(m.measures.empty());
}

TEST(ModelParse, RationalRoundTripsExactly) {
  const Model m = parse_model_text(R"({"algebra": {"atoms": ["a", "b"]},
                                       "measures": {"m": {"values": {"a": "1/3", "b": "-2/6"}}}})");
  const VectorMeasure& nu = m.measures.at("m");
  EXPECT_EQ(nu.scalar_value(Element::atom(0)), Rational(1, 3));
  EXPECT_EQ(to_string(nu.scalar_value(Element::atom(0))), "1/3");
  EXPECT_EQ(to_string(nu.scalar_value(Element::atom(1))), "-1/3");
  Options o;
  o.element = "a";
  const Report r = run("variation", m, o);
  EXPECT_EQ(r.results["value"][0], "1/3");
}

TEST(ModelParse, GeneratedAlgebraAndAllSections) {
  const Model m = parse_model(kReference);
  EXPECT_EQ(m.algebra.atoms(), (std::vector<std::string>{"a", "b", "c"}));
  EXPECT_EQ(m.measures.size(), 5u);
  EXPECT_EQ(m.functions.size(), 2u);
  EXPECT_EQ(m.vector_functions.size(), 1u);
  EXPECT_EQ(m.cosheaves.size(), 3u);
  EXPECT_EQ(m.sheaves.size(), 2u);
  ASSERT_TRUE(m.product.has_value());
  ASSERT_TRUE(m.kan.has_value());
  // h = (1/2) chi{a,b} + chi{b,c}
  const SimpleElement& h = m.functions.at("h");
  EXPECT_EQ(h.atom_values(), (std::vector<Rational>{Rational(1, 2), Rational(3, 2), Rational(1)}));

  const Model g =
      parse_model_text(R"({"algebra": {"ground": ["1", "2", "3", "4"], "generators": [["1", "2"]]}})");
  EXPECT_EQ(g.algebra.atom_count(), 2u);
}

TEST(ModelParse, DanglingMeasureReferenceNamesPath) {
  const ModelError e = model_error(
      "{\n  \"algebra\": {\"atoms\": [\"a\"]},\n  \"measures\": {},\n  \"cosheaves\": {\"c\": \"l1-of:missing\"}\n}\n");
  EXPECT_EQ(e.code(), ErrorCode::UnresolvedReference);
  EXPECT_EQ(e.path(), "/cosheaves/c");
  EXPECT_EQ(e.line(), 4u);
  EXPECT_EQ(e.column(), 22u);
  EXPECT_NE(std::string(e.what()).find("inline.json:4:22"), std::string::npos);
}

TEST(ModelParse, UnknownAtomAndSpaceReferences) {
  const ModelError atom = model_error(R"({"algebra": {"atoms": ["a"]}, "measures": {"m": {"values": {"zz": "1"}}}})");
  EXPECT_EQ(atom.code(), ErrorCode::UnresolvedReference);
  EXPECT_EQ(atom.path(), "/measures/m/values/zz");
  const ModelError space =
      model_error(R"({"algebra": {"atoms": ["a"]}, "measures": {"m": {"target": "Q", "values": {}}}})");
  EXPECT_EQ(space.code(), ErrorCode::UnresolvedReference);
  EXPECT_EQ(space.path(), "/measures/m/target");
}

TEST(ModelParse, SyntaxErrorCarriesLineAndColumn) {
  const ModelError e = model_error("{\n  \"algebra\": {\"atoms\": [\"a\"]},\n  \"measures\": {,}\n}");
  EXPECT_EQ(e.code(), ErrorCode::SyntaxError);
  EXPECT_EQ(e.line(), 3u);
  EXPECT_EQ(e.column(), 16u);
}

TEST(ModelParse, MalformedRationalsAreSyntaxErrors) {
  EXPECT_EQ(model_error(R"({"algebra": {"atoms": ["a"]}, "measures": {"m": {"values": {"a": "1/0"}}}})").code(),
            ErrorCode::SyntaxError);
  EXPECT_EQ(model_error(R"({"algebra": {"atoms": ["a"]}, "measures": {"m": {"values": {"a": 0.5}}}})").code(),
            ErrorCode::SyntaxError);
}

TEST(ModelParse, NonPositiveWeightHasItsOwnCode) {
  const ModelError e = model_error(R"({"algebra": {"atoms": ["a"]}, "spaces": {"B": {"weights": ["1", "0"]}}})");
  EXPECT_EQ(e.code(), ErrorCode::NonPositiveWeight);
  EXPECT_EQ(e.path(), "/spaces/B/weights/1");
}

TEST(ModelParse, ErrorCodesAreDistinct) {
  const std::set<ErrorCode> codes{ErrorCode::SyntaxError, ErrorCode::UnresolvedReference, ErrorCode::NonPositiveWeight};
  EXPECT_EQ(codes.size(), 3u);
}

TEST(ModelParse, StructuralMistakesRejected) {
  EXPECT_EQ(model_error(R"({"algebra": {"atoms": ["a", "a"]}})").code(), ErrorCode::InvalidModel);
  EXPECT_EQ(model_error(R"({"algebra": {"atoms": ["a"]}, "mesures": {}})").code(), ErrorCode::InvalidModel);
  EXPECT_EQ(model_error(R"({"algebra": {"atoms": ["a"]}, "measures": {"m": {"target": {"dim": 2},
            "values": {"a": ["1"]}}}})")
                .code(),
            ErrorCode::ShapeMismatch);
  // Extension maps live on covering pairs only.
  EXPECT_EQ(model_error(R"({"algebra": {"atoms": ["a", "b"]}, "cosheaves": {"c": {"spaces": {"top": {"dim": 1}},
            "maps": [{"from": "bot", "to": "top", "matrix": []}]}}})")
                .code(),
            ErrorCode::InvalidModel);
}

TEST(ModelParse, ExplicitCosheafMatchesAtomForm) {
  const Model m = parse_model_text(R"({
    "algebra": {"atoms": ["a", "b"]},
    "cosheaves": {
      "explicit": {
        "spaces": {"a": {"dim": 1}, "b": {"dim": 1}, "top": {"dim": 2}},
        "maps": [{"from": "a", "to": "top", "matrix": [["1"], ["0"]]},
                 {"from": "b", "to": "top", "matrix": [["0"], ["1"]]}]
      }
    }
  })");
  const PreCosheaf& c = m.cosheaves.at("explicit");
  EXPECT_TRUE(is_cosheaf(c, true).holds);
  EXPECT_EQ(c.extension(Element::atom(0), m.algebra.top()).matrix(), Matrix::from_rows({{1}, {0}}, 1));
}

TEST(ElementExpression, OperatorsAndPrecedence) {
  const BoolAlg alg({"a", "b", "c"});
  const auto e = [&](const char* text) { return parse_element(alg, text).bits(); };
  EXPECT_EQ(e("a"), 0b001u);
  EXPECT_EQ(e("{a, c}"), 0b101u);
  EXPECT_EQ(e("{}"), 0u);
  EXPECT_EQ(e("top"), 0b111u);
  EXPECT_EQ(e("bot"), 0u);
  EXPECT_EQ(e("~a"), 0b110u);
  EXPECT_EQ(e("a | b & c"), 0b001u);
  EXPECT_EQ(e("(a | b) & b"), 0b010u);
  EXPECT_EQ(e("top \\ b"), 0b101u);
  EXPECT_EQ(e("~(a | b)"), 0b100u);
  EXPECT_EQ(e("~~a"), 0b001u);
}

TEST(ElementExpression, Errors) {
  const BoolAlg alg({"a", "b"});
  const auto code = [&](const char* text) {
    try {
      parse_element(alg, text);
    } catch (const Error& err) {
      return err.code();
    }
    return ErrorCode::InvalidModel;
  };
  EXPECT_EQ(code("zz"), ErrorCode::UnresolvedReference);
  EXPECT_EQ(code("(a"), ErrorCode::SyntaxError);
  EXPECT_EQ(code("a |"), ErrorCode::SyntaxError);
  EXPECT_EQ(code("a b"), ErrorCode::SyntaxError);
  EXPECT_EQ(code("{a,"), ErrorCode::SyntaxError);
}

TEST(ElementExpression, RandomExpressionsMatchSetSemantics) {
  catmeas::testing::Rng rng(91);
  const BoolAlg alg({"p", "q", "r", "s"});
  using Set = std::set<std::string>;
  const Set top{"p", "q", "r", "s"};
  // Builds a random expression together with its meaning as a set of names.
  std::function<std::pair<std::string, Set>(int)> gen = [&](int depth) -> std::pair<std::string, Set> {
    const std::size_t kind = catmeas::testing::uniform(rng, 0, depth > 0 ? 6 : 2);
    if (kind == 0) {
      const std::string id = alg.atom_id(catmeas::testing::uniform(rng, 0, 3));
      return {id, Set{id}};
    }
    if (kind == 1) {
      Set s;
      std::string text = "{";
      for (const auto& id : top)
        if (catmeas::testing::uniform(rng, 0, 1)) {
          text += (s.empty() ? "" : ",") + id;
          s.insert(id);
        }
      return {text + "}", s};
    }
    if (kind == 2) return catmeas::testing::uniform(rng, 0, 1) ? std::pair{std::string("top"), top} : std::pair{std::string("bot"), Set{}};
    if (kind == 3) {
      auto [t, s] = gen(depth - 1);
      Set out;
      for (const auto& id : top)
        if (!s.count(id)) out.insert(id);
      return {"~(" + t + ")", out};
    }
    auto [lt, ls] = gen(depth - 1);
    auto [rt, rs] = gen(depth - 1);
    Set out;
    for (const auto& id : top) {
      const bool l = ls.count(id), r = rs.count(id);
      if ((kind == 4 && (l || r)) || (kind == 5 && l && r) || (kind == 6 && l && !r)) out.insert(id);
    }
    const char* op = kind == 4 ? " | " : kind == 5 ? " & " : " \\ ";
    return {"(" + lt + op + rt + ")", out};
  };
  for (int trial = 0; trial < 300; ++trial) {
    const auto [text, meaning] = gen(4);
    const Element e = parse_element(alg, text);
    Set got;
    for (auto a : alg.atoms_below(e)) got.insert(alg.atom_id(a));
    EXPECT_EQ(got, meaning) << text;
  }
}

TEST(Commands, SpectralOnL1CosheafReportsDiagonalProjections) {
  const Model m = parse_model(kReference);
  Options o;
  o.cosheaf = "l1mu";
  const Report r = run("spectral", m, o);
  EXPECT_TRUE(r.verified);
  for (std::size_t a = 0; a < 3; ++a) {
    const json& p = r.results["projections"][m.algebra.format(Element::atom(a))];
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(p[i][j], i == a && j == a ? "1" : "0");
  }
}

TEST(Commands, FubiniOnTwoByThreeProductGivesThreeEqualRationals) {
  const Report r = run("fubini", parse_model(kReference), Options{});
  EXPECT_TRUE(r.verified);
  // (1 + 2 - 3/2) / 6
  EXPECT_EQ(r.results["joint"], "1/4");
  EXPECT_EQ(r.results["inner_left"], "1/4");
  EXPECT_EQ(r.results["inner_right"], "1/4");
}

TEST(Commands, IsoWitnessRenderedWithBothMatrices) {
  const Report r = run("bochner", parse_model(kReference), Options{});
  EXPECT_TRUE(r.results["witness"]["forward"].is_array());
  EXPECT_TRUE(r.results["witness"]["backward"].is_array());
  EXPECT_TRUE(r.results["witness"]["isometric"].get<bool>());
}

TEST(Commands, LipschitzAgainstNullControlIsUnbounded) {
  Options o;
  o.measure = "mu";
  o.control = "lam";
  const Report r = run("lipschitz", parse_model(kReference), o);
  EXPECT_FALSE(r.results["bounded"].get<bool>());
  EXPECT_EQ(r.results["charged_null_atoms"], json::array({"b"}));
}

TEST(Commands, PartitionsCountIsBell) {
  const Report r = run("partitions", parse_model(kReference), Options{});
  EXPECT_EQ(r.results["count"], 5);
  Options o;
  o.max_blocks = 2;
  EXPECT_EQ(run("partitions", parse_model(kReference), o).results["count"], 4);
}

TEST(Commands, MismatchAndUnknownCommand) {
  const Model minimal = parse_model_text(R"({"algebra": {"atoms": ["a"]}})");
  const auto code = [&](const std::string& cmd, const Options& o) {
    try {
      run(cmd, minimal, o);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::InvalidModel;
  };
  EXPECT_EQ(code("fubini", Options{}), ErrorCode::CommandMismatch);
  EXPECT_EQ(code("variation", Options{}), ErrorCode::CommandMismatch);
  EXPECT_EQ(code("nonsense", Options{}), ErrorCode::UnknownCommand);
  Options o;
  o.measure = "ghost";
  const Model ref = parse_model(kReference);
  EXPECT_THROW(run("variation", ref, o), Error);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(invoke({"verify-all", "--model", kReference}).code, 0);
  EXPECT_EQ(invoke({"verify-all", "--model", kBroken}).code, 1);
  EXPECT_EQ(invoke({"check-cosheaf", "--model", kBroken}).code, 1);
  EXPECT_EQ(invoke({"frobnicate", "--model", kReference}).code, 2);
  EXPECT_EQ(invoke({"stone", "--model", "/nonexistent/model.json"}).code, 2);
  EXPECT_EQ(invoke({"stone"}).code, 2);
  EXPECT_EQ(invoke({"stone", "--model", kReference, "--format", "xml"}).code, 2);
  EXPECT_EQ(invoke({"variation", "--model", kReference, "--element", "a |"}).code, 2);
}

TEST(Cli, StructuredOutputIsByteStable) {
  for (const auto& seed : {"0", "17"}) {
    const CliRun a = invoke({"verify-all", "--model", kReference, "--seed", seed, "--format", "structured"});
    const CliRun b = invoke({"verify-all", "--model", kReference, "--seed", seed, "--format", "structured"});
    EXPECT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
  }
}

TEST(Cli, NoFloatsInReports) {
  const CliRun run = invoke({"verify-all", "--model", kReference, "--format", "structured"});
  const json doc = json::parse(run.out);
  std::function<void(const json&)> walk = [&](const json& v) {
    EXPECT_FALSE(v.is_number_float());
    if (v.is_structured())
      for (const auto& x : v) walk(x);
  };
  walk(doc);
}

TEST(Cli, BrokenFixtureReportsFailingPartitionByAtoms) {
  const CliRun run = invoke({"verify-all", "--model", kBroken, "--format", "structured"});
  ASSERT_EQ(run.code, 1);
  const json doc = json::parse(run.out);
  EXPECT_EQ(doc["status"], "failed");
  bool found = false;
  for (const auto& c : doc["results"]["checks"]) {
    if (c["name"] != "cosheaf/constant") continue;
    found = true;
    EXPECT_EQ(c["status"], "fail");
    EXPECT_EQ(c["counterexample"]["parent"], json::array({"a", "b"}));
    EXPECT_EQ(c["counterexample"]["blocks"], json::parse(R"([["a"], ["b"]])"));
  }
  EXPECT_TRUE(found);
}

TEST(Cli, TextAndStructuredAgreeOnContent) {
  for (const std::string cmd : {"spectral", "bochner", "fubini", "cosheafify", "kan", "verify-all"}) {
    const CliRun text = invoke({cmd, "--model", kReference});
    const CliRun structured = invoke({cmd, "--model", kReference, "--format", "structured"});
    std::vector<std::string> leaves;
    collect_leaves(json::parse(structured.out), leaves);
    for (const auto& leaf : leaves) EXPECT_NE(text.out.find(leaf), std::string::npos) << cmd << ": " << leaf;
  }
}

TEST(Cli, TimingIsOptIn) {
  EXPECT_EQ(invoke({"stone", "--model", kReference, "--format", "structured"}).out.find("elapsed_us"), std::string::npos);
  EXPECT_NE(invoke({"stone", "--model", kReference, "--format", "structured", "--timing"}).out.find("elapsed_us"),
            std::string::npos);
}
