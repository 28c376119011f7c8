#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

#include "oracles.hpp"
#include "tvgsr/io.hpp"

using namespace tvgsr;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "tvgsr_test_io";
  fs::create_directories(dir);
  return dir / name;
}

void write_text(const fs::path& p, const std::string& s) {
  std::ofstream out(p);
  out << s;
}

}  // namespace

TEST(FormatNumber, SeventeenDigitsRoundTrip) {
  oracle::Gen gen(1);
  for (int i = 0; i < 1000; ++i) {
    const double v = gen.normal() * std::pow(10.0, gen.integer(-300, 300));
    EXPECT_EQ(std::stod(io::format_number(v)), v);
  }
  EXPECT_EQ(io::format_number(0.1), "0.10000000000000001");
}

TEST(ReadMatrix, DelimitersAndHeader) {
  const auto a = scratch("comma.csv"), b = scratch("tab.tsv"), c = scratch("space.txt");
  write_text(a, "t1,t2,t3\n1,2,3\n4,5,6\n");
  write_text(b, "1\t2\t3\r\n4\t5\t6\r\n");
  write_text(c, "  1   2 3\n\n4 5\t 6\n");
  Matrix expected(2, 3);
  expected << 1, 2, 3, 4, 5, 6;
  const auto ma = io::read_matrix(a.string());
  EXPECT_EQ(ma.values, expected);
  EXPECT_EQ(ma.header, (std::vector<std::string>{"t1", "t2", "t3"}));
  const auto mb = io::read_matrix(b.string());
  EXPECT_EQ(mb.values, expected);
  EXPECT_TRUE(mb.header.empty());
  EXPECT_EQ(io::read_matrix(c.string()).values, expected);
}

TEST(ReadMatrix, Errors) {
  EXPECT_THROW(io::read_matrix("/nonexistent/dir/file.csv"), IoError);
  const auto ragged = scratch("ragged.csv");
  write_text(ragged, "1,2\n3\n");
  try {
    io::read_matrix(ragged.string());
    FAIL();
  } catch (const IoError& e) {
    EXPECT_NE(std::string(e.what()).find(":2:"), std::string::npos);
  }
}

TEST(WriteMatrix, RoundTripIsBitExact) {
  oracle::Gen gen(2);
  Matrix x = gen.matrix(7, 4) * 1e7;
  x(0, 0) = std::numeric_limits<double>::denorm_min();
  x(1, 1) = -0.0;
  x(2, 2) = std::numeric_limits<double>::max();
  const auto p = scratch("rt.csv");
  io::write_matrix(p.string(), x, {"a", "b", "c", "d"});
  const auto back = io::read_matrix(p.string());
  EXPECT_EQ(back.values, x);
  EXPECT_EQ(back.header.size(), 4u);
  EXPECT_THROW(io::write_matrix("/nonexistent/dir/out.csv", x), IoError);
}

TEST(Coordinates, RequireHeaderAndThreeColumns) {
  const auto noheader = scratch("nh.csv"), cols = scratch("cols.csv"), good = scratch("good.csv");
  write_text(noheader, "a,1,2\nb,3,4\n");
  EXPECT_THROW(io::read_coordinates(noheader.string()), IoError);
  write_text(cols, "id,lat,lon\na,1,2,3\n");
  EXPECT_THROW(io::read_coordinates(cols.string()), IoError);
  write_text(good, "id,lat,lon\nNYC,40.7,-74.0\nLA,34.0,-118.2\n");
  const auto cf = io::read_coordinates(good.string());
  EXPECT_EQ(cf.node_ids, (std::vector<std::string>{"NYC", "LA"}));
  EXPECT_EQ(cf.coords.matrix()(1, 1), -118.2);
}

TEST(Manifest, RoundTrip) {
  const auto p = scratch("manifest.txt");
  io::write_manifest(p.string(), {{"name", "synthetic"}, {"n_nodes", "100"}, {"k", "10"}});
  const auto m = io::read_manifest(p.string());
  EXPECT_EQ(m.at("name"), "synthetic");
  EXPECT_EQ(m.at("k"), "10");
  write_text(p, "# comment\nkey = value with spaces\n\nbad line\n");
  EXPECT_THROW(io::read_manifest(p.string()), IoError);
}

TEST(Trace, TwoColumnFormat) {
  const auto p = scratch("trace.csv");
  io::write_trace(p.string(), {3.0, 2.0, 1.5});
  const auto m = io::read_matrix(p.string());
  EXPECT_EQ(m.header, (std::vector<std::string>{"iteration", "loss"}));
  Matrix expected(3, 2);
  expected << 0, 3, 1, 2, 2, 1.5;
  EXPECT_EQ(m.values, expected);
}
