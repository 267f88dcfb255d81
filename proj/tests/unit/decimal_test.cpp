#include <gtest/gtest.h>

#include <random>

#include "chaseforge/decimal.hpp"
#include "chaseforge/error.hpp"
#include "chaseforge/value.hpp"

namespace cf = chaseforge;

namespace {

cf::Decimal D(const char* s) { return *cf::Decimal::parse(s); }

}  // namespace

TEST(Decimal, ParsesAndPrintsMinimalForm) {
  EXPECT_EQ(D("37.2").to_string(), "37.2");
  EXPECT_EQ(D("62.000").to_string(), "62");
  EXPECT_EQ(D("-0.5").to_string(), "-0.5");
  EXPECT_EQ(D("0").to_string(), "0");
  EXPECT_FALSE(cf::Decimal::parse("1.1234567"));
  EXPECT_FALSE(cf::Decimal::parse("abc"));
  EXPECT_FALSE(cf::Decimal::parse("1."));
}

TEST(Decimal, TradingArithmeticIsExact) {
  EXPECT_EQ(D("0.3") * D("124"), D("37.2"));
  EXPECT_EQ(D("0.5") * D("124"), D("62"));
  EXPECT_EQ(D("0.3") * D("147") - D("37.2"), D("6.9"));
  EXPECT_EQ((D("0.3") * D("147") - D("37.2")).to_string(), "6.9");
}

TEST(Decimal, DivisionRoundsHalfAwayFromZero) {
  EXPECT_EQ(D("1") / D("3"), D("0.333333"));
  EXPECT_EQ(D("2") / D("3"), D("0.666667"));
  EXPECT_EQ(D("-2") / D("3"), D("-0.666667"));
  EXPECT_THROW(D("1") / D("0"), cf::ArithmeticError);
}

TEST(Decimal, OverflowThrows) {
  cf::Decimal big = cf::Decimal::from_units(INT64_MAX);
  EXPECT_THROW(big + D("1"), cf::ArithmeticError);
  EXPECT_THROW(big * D("2"), cf::ArithmeticError);
  EXPECT_THROW(cf::Decimal::from_int(INT64_MAX / 10), cf::ArithmeticError);
}

TEST(Decimal, RoundTripProperty) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 2000; ++i) {
    auto units = static_cast<std::int64_t>(rng() % 2'000'000'000'000ULL) - 1'000'000'000'000LL;
    cf::Decimal d = cf::Decimal::from_units(units);
    auto back = cf::Decimal::parse(d.to_string());
    ASSERT_TRUE(back) << d.to_string();
    EXPECT_EQ(*back, d);
  }
}

TEST(Decimal, AdditionAgreesWithIntegerUnits) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 2000; ++i) {
    auto a = static_cast<std::int64_t>(rng() % 1'000'000'000) - 500'000'000;
    auto b = static_cast<std::int64_t>(rng() % 1'000'000'000) - 500'000'000;
    EXPECT_EQ((cf::Decimal::from_units(a) + cf::Decimal::from_units(b)).units(), a + b);
    EXPECT_EQ((cf::Decimal::from_units(a) - cf::Decimal::from_units(b)).units(), a - b);
  }
}

TEST(Value, IntegersAndDecimalsUnify) {
  EXPECT_EQ(cf::Value::integer(62), cf::Value::number(D("0.5") * D("124")));
  EXPECT_EQ(cf::Value::integer(62).hash(), cf::Value::number(D("62.0")).hash());
}

TEST(Value, PrintedForms) {
  EXPECT_EQ(cf::Value::string("EGTech").to_source(), "\"EGTech\"");
  EXPECT_EQ(cf::Value::string("EGTech").to_text(), "EGTech");
  EXPECT_EQ(cf::Value::string("a\"b").to_source(), "\"a\\\"b\"");
  EXPECT_EQ(cf::Value::null(4).to_source(), "_:n4");
  EXPECT_EQ(cf::Value::boolean(true).to_source(), "true");
  EXPECT_EQ(cf::Value::number(D("37.2")).to_text(), "37.2");
}

TEST(Value, KindsOrderConsistently) {
  cf::Value s = cf::Value::string("a"), n = cf::Value::integer(1);
  EXPECT_NE(s, n);
  EXPECT_TRUE((s < n) != (n < s));
}
