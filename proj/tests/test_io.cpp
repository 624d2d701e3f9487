#include <gtest/gtest.h>

#include <maassden/io.hpp>
#include <sstream>

using namespace maassden;

namespace {

std::string data(const std::string& rel) { return std::string(MAASSDEN_TEST_DATA) + "/" + rel; }

FormsFile parse_forms_text(const std::string& s) {
  std::istringstream in(s);
  return parse_forms(in);
}

ZerosFile parse_zeros_text(const std::string& s) {
  std::istringstream in(s);
  return parse_zeros(in);
}

template <class F>
errc code_of(F&& f) {
  try {
    f();
  } catch (const error& e) {
    return e.code();
  }
  return errc::config;  // sentinel: no error raised
}

}  // namespace

TEST(Forms, BundledFileRoundTrip) {
  FormsFile a = read_forms_file(data("level1.maass"));
  ASSERT_EQ(a.records.size(), 8u);
  std::ostringstream out;
  write_forms(a, out);
  FormsFile b = parse_forms_text(out.str());
  ASSERT_EQ(b.records.size(), a.records.size());
  EXPECT_EQ(b.preamble, a.preamble);
  EXPECT_EQ(b.comments, a.comments);
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    EXPECT_EQ(a.records[i].t, b.records[i].t);
    EXPECT_EQ(a.records[i].sign, b.records[i].sign);
    EXPECT_EQ(a.records[i].norm_sq, b.records[i].norm_sq);
    EXPECT_EQ(a.records[i].hecke, b.records[i].hecke);
  }
  // writing again is a fixed point
  std::ostringstream again;
  write_forms(b, again);
  EXPECT_EQ(out.str(), again.str());
}

TEST(Forms, BundledRecordsAreSane) {
  std::vector<MaassFormRecord> f = load_forms(data("level1.maass"));
  EXPECT_NEAR(f.front().t, 9.533695261353557, 1e-12);
  for (std::size_t i = 1; i < f.size(); ++i) EXPECT_LT(f[i - 1].t, f[i].t);
  for (const MaassFormRecord& r : f) {
    EXPECT_EQ(r.level.N, 1);
    EXPECT_TRUE(r.hecke.count(97));
  }
}

TEST(Forms, ImaginaryParameterAndConventions) {
  FormsFile f = parse_forms_text(
      "maass-v1 level=6 norm_convention=fundamental_domain\n"
      "t=i*0.2 sign=+1 norm2=24 p5=0.1\n");
  ASSERT_EQ(f.records.size(), 1u);
  EXPECT_TRUE(f.records[0].t_imaginary);
  EXPECT_EQ(f.records[0].spectral_parameter(), cplx(0.0, 0.2));
  EXPECT_DOUBLE_EQ(f.records[0].normalized_norm_sq(), 2.0);
  std::ostringstream out;
  write_forms(f, out);
  EXPECT_NE(out.str().find("t=i*"), std::string::npos);
  EXPECT_TRUE(parse_forms_text(out.str()).records[0].t_imaginary);
}

TEST(Forms, HeckeBoundViolationRejected) {
  EXPECT_EQ(code_of([] { parse_forms_text("maass-v1 level=1\nt=9.5 sign=+1 norm2=1 p2=3\n"); }), errc::invariant);
  EXPECT_EQ(code_of([] { parse_forms_text("maass-v1 level=1\nt=9.5 sign=+1 norm2=1 p4=0.1\n"); }), errc::invariant);
  EXPECT_EQ(code_of([] { parse_forms_text("maass-v1 level=1\nt=i*0.5 sign=+1 norm2=1\n"); }), errc::invariant);
}

TEST(Forms, ParseErrorsCarryLine) {
  try {
    parse_forms_text("maass-v1 level=1\n# c\nt=1 sign=+1 norm2=1\nt=2 sign=0 norm2=1\n");
    FAIL();
  } catch (const parse_error& e) {
    EXPECT_EQ(e.line(), 4u);
  }
  EXPECT_EQ(code_of([] { parse_forms_text("t=1 sign=+1 norm2=1\n"); }), errc::parse);
  EXPECT_EQ(code_of([] { parse_forms_text("maass-v1 level=4\n"); }), errc::parse);
  EXPECT_EQ(code_of([] { parse_forms_text("maass-v1 level=1 colour=red\n"); }), errc::parse);
  EXPECT_EQ(code_of([] { parse_forms_text("maass-v1 level=1\nt=1 sign=+1\n"); }), errc::parse);
  EXPECT_EQ(code_of([] { parse_forms_text("maass-v1 level=1\nt=1 t=2 sign=+1 norm2=1\n"); }), errc::parse);
  EXPECT_EQ(code_of([] { parse_forms_text("maass-v1 level=1\nt=abc sign=+1 norm2=1\n"); }), errc::parse);
  EXPECT_EQ(code_of([] { read_forms_file("/nonexistent/x.maass"); }), errc::parse);
}

TEST(Forms, EmptyRecordListIsValid) {
  FormsFile f = parse_forms_text("# nothing yet\nmaass-v1 level=1\n# trailing\n");
  EXPECT_TRUE(f.records.empty());
  EXPECT_EQ(f.preamble.size(), 1u);
  std::ostringstream out;
  write_forms(f, out);
  EXPECT_TRUE(parse_forms_text(out.str()).records.empty());
}

TEST(Zeros, BundledFilesMatchDeclaredCounts) {
  for (const char* name : {"level1_t9.53370", "level1_t12.17301", "level1_t18.18092"}) {
    ZerosFile z = read_zeros_file(data(std::string("zeros/") + name + ".zeros"));
    EXPECT_EQ(static_cast<long>(z.zeros.gammas.size()), z.declared_count) << name;
    EXPECT_TRUE(z.zeros.mirror);
    EXPECT_TRUE(std::isfinite(z.zeros.completeness_height));
    EXPECT_TRUE(std::is_sorted(z.zeros.gammas.begin(), z.zeros.gammas.end()));
  }
  // sign -1: the central zero is listed once and counted once
  ZeroList z = load_zeros(data("zeros/level1_t9.53370.zeros"));
  EXPECT_EQ(z.gammas.front(), 0.0);
  EXPECT_EQ(z.ordinates().size(), 2 * z.gammas.size() - 1);
}

TEST(Zeros, RoundTrip) {
  ZerosFile a = parse_zeros_text("zeros-v1 mirror=1 completeness_height=inf\n# x\n1.5\n2.25\n");
  EXPECT_TRUE(std::isinf(a.zeros.completeness_height));
  std::ostringstream out;
  write_zeros(a, out);
  ZerosFile b = parse_zeros_text(out.str());
  EXPECT_EQ(b.zeros.gammas, a.zeros.gammas);
  EXPECT_EQ(b.declared_count, 2);
  EXPECT_EQ(b.comments, a.comments);
}

TEST(Zeros, Errors) {
  try {
    parse_zeros_text("zeros-v1 mirror=1\n2.0\n\n1.0\n");
    FAIL();
  } catch (const parse_error& e) {
    EXPECT_EQ(e.line(), 4u);
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
  EXPECT_EQ(code_of([] { parse_zeros_text("zeros-v1 count=3\n1.0\n2.0\n"); }), errc::parse);
  EXPECT_EQ(code_of([] { parse_zeros_text("zeros-v1 mirror=1\n-1.0\n"); }), errc::parse);
  EXPECT_EQ(code_of([] { parse_zeros_text("zeros-v1 mirror=2\n"); }), errc::parse);
  EXPECT_EQ(code_of([] { parse_zeros_text("1.0\n"); }), errc::parse);
  ZerosFile ok = parse_zeros_text("zeros-v1 mirror=0\n-1.0\n1.0\n");
  EXPECT_EQ(ok.zeros.ordinates().size(), 2u);
}

TEST(Tsv, WidthChecked) {
  std::ostringstream out;
  TsvWriter w(out);
  w.columns({"a", "b"});
  w.row({1.5, std::string("x")});
  EXPECT_THROW(w.row({1.0}), error);
  EXPECT_EQ(out.str().substr(0, 5), "#a\tb\n");
}
