#include <catch2/catch.hpp>

#include <sstream>
#include <vector>

#include "elliptope/io.hpp"
#include "elliptope/matrix_sampler.hpp"
#include "elliptope/rng.hpp"

using elliptope::Corm1Reader;
using elliptope::Corm1Writer;
using elliptope::CorrelationMatrix;
using elliptope::CsvMatrixWriter;
using elliptope::exact_elliptope_sample;
using elliptope::Rng;

TEST_CASE("corm1 round-trips matrices bit-exactly") {
  Rng rng(701);
  std::vector<CorrelationMatrix> ms;
  for (int k = 0; k < 3; ++k) ms.push_back(exact_elliptope_sample(4, rng));

  std::stringstream buf;
  Corm1Writer writer(buf, 4, ms.size());
  for (const auto& m : ms) writer.write(m);
  REQUIRE(writer.written() == 3);

  Corm1Reader reader(buf);
  REQUIRE(reader.dim() == 4);
  REQUIRE(reader.count() == 3);
  for (const auto& m : ms) {
    REQUIRE_FALSE(reader.done());
    const CorrelationMatrix back = reader.next();
    REQUIRE(back.entries() == m.entries());
  }
  REQUIRE(reader.done());
}

TEST_CASE("corm1 header layout is stable") {
  std::stringstream buf;
  Corm1Writer writer(buf, 2, 1);
  CorrelationMatrix m(2);
  m.set(0, 1, 0.5);
  writer.write(m);
  const std::string bytes = buf.str();
  REQUIRE(bytes.size() == 6 + 4 + 8 + 4 * 8);
  REQUIRE(bytes.substr(0, 6) == std::string("CORM1\0", 6));
  REQUIRE(bytes[6] == 2);  // dim, little-endian
  REQUIRE(bytes[7] == 0);
  REQUIRE(bytes[10] == 1);  // count, little-endian
}

TEST_CASE("corm1 reader rejects a bad magic") {
  std::stringstream buf;
  Corm1Writer writer(buf, 2, 0);
  std::string bytes = buf.str();
  bytes[0] = 'X';
  std::stringstream corrupted(bytes);
  REQUIRE_THROWS_AS(Corm1Reader(corrupted), std::runtime_error);
}

TEST_CASE("corm1 writer rejects a dimension mismatch") {
  std::stringstream buf;
  Corm1Writer writer(buf, 3, 1);
  REQUIRE_THROWS_AS(writer.write(CorrelationMatrix(2)), std::invalid_argument);
}

TEST_CASE("csv blocks are blank-line separated full-precision rows") {
  CorrelationMatrix m(2);
  m.set(0, 1, 0.125);
  std::stringstream buf;
  CsvMatrixWriter writer(buf);
  writer.write(m);
  writer.write(m);
  REQUIRE(buf.str() == "1,0.125\n0.125,1\n\n1,0.125\n0.125,1\n");
}

TEST_CASE("csv preserves all double digits") {
  Rng rng(702);
  const CorrelationMatrix m = exact_elliptope_sample(3, rng);
  std::stringstream buf;
  CsvMatrixWriter writer(buf);
  writer.write(m);
  double parsed = 0.0;
  std::string first;
  std::getline(buf, first);
  REQUIRE(std::sscanf(first.c_str(), "%lf", &parsed) == 1);
  REQUIRE(parsed == m(0, 0));
  std::string second;
  std::getline(buf, second);
  REQUIRE(std::sscanf(second.c_str(), "%lf", &parsed) == 1);
  REQUIRE(parsed == m(1, 0));
}
