#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "reference.hpp"
#include "rmc/errors.hpp"
#include "rmc/matrix_io.hpp"
#include "rmc/observations.hpp"
#include "rmc/problem.hpp"

using namespace rmc;

TEST(DenseIo, RoundTripIsExact) {
  Matrix a(2, 3);
  a << 1.0 / 3.0, -2.5e-300, 7, 0, 1e300, -0.1;
  std::stringstream s;
  write_dense(s, a);
  EXPECT_EQ(read_dense(s), a);
}

TEST(DenseIo, ParseErrorsCarryLine) {
  std::istringstream bad("2 2\n1 2\n3 x\n");
  try {
    read_dense(bad, "m.txt");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("m.txt:3"), std::string::npos) << e.what();
  }
  std::istringstream short_row("2 2\n1 2\n3\n");
  EXPECT_THROW(read_dense(short_row), ParseError);
  std::istringstream truncated("3 1\n1\n2\n");
  EXPECT_THROW(read_dense(truncated), ParseError);
}

TEST(DenseIo, MissingFileIsIoError) {
  EXPECT_THROW(load_dense("/nonexistent/dir/m.txt"), IoError);
}

TEST(ObservationIo, RoundTrip) {
  const Instance inst = make_instance(12, 9, 2, 0.4, 0.2, 5);
  std::stringstream s;
  write_observations(s, inst.data.observations);
  const ObservationSet back = read_observations(s);
  ASSERT_EQ(back.size(), inst.data.observations.size());
  EXPECT_EQ(back.rows(), 12);
  EXPECT_EQ(back.cols(), 9);
  EXPECT_EQ(back.sample_rate(), 0.4);
  for (std::size_t k = 0; k < back.size(); ++k) {
    EXPECT_EQ(back.entries()[k].cell(), inst.data.observations.entries()[k].cell());
    EXPECT_EQ(back.entries()[k].value, inst.data.observations.entries()[k].value);
  }
}

TEST(ObservationIo, RejectsUnsortedAndOutOfRange) {
  std::istringstream unsorted("2 2 0.5\n1 0 1.0\n0 1 2.0\n");
  EXPECT_THROW(read_observations(unsorted), Error);
  std::istringstream range("2 2 0.5\n0 2 1.0\n");
  EXPECT_THROW(read_observations(range), Error);
  std::istringstream rate("2 2 1.5\n");
  EXPECT_THROW(read_observations(rate), Error);
}

TEST(ObservationSet, Invariants) {
  EXPECT_THROW(ObservationSet(2, 2, 1.0, {{0, 1, 1.0}, {0, 1, 2.0}}), Error);
  EXPECT_THROW(ObservationSet(2, 2, 0.0, {}), ParameterError);
  EXPECT_THROW(ObservationSet(2, 2, 1.0, {{0, 0, std::nan("")}}), Error);
  const ObservationSet ok(2, 2, 1.0, {{0, 1, 1.0}, {1, 0, 0.0}});
  EXPECT_EQ(ok.support_size(), 1u);
  Matrix d = Matrix::Zero(2, 2);
  d(0, 1) = 1.0;
  EXPECT_EQ(ok.to_dense(), d);
}

TEST(TruthIo, RoundTrip) {
  const Instance inst = make_instance(10, 10, 2, 0.5, 0.3, 8);
  ref::TempDir dir("truth");
  save_truth((dir / "x.truth").string(), inst.truth);
  const GroundTruth back = load_truth((dir / "x.truth").string(), 2);
  EXPECT_EQ(back.l_star, inst.truth.l_star);
  ASSERT_EQ(back.s_star.size(), inst.truth.s_star.size());
  for (std::size_t k = 0; k < back.s_star.size(); ++k) {
    EXPECT_EQ(back.s_star[k].cell(), inst.truth.s_star[k].cell());
    EXPECT_EQ(back.s_star[k].value, inst.truth.s_star[k].value);
  }
  EXPECT_NEAR(back.entry_scale(), inst.truth.entry_scale(), 1e-12 * inst.truth.entry_scale());
}
