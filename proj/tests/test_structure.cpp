#include <random>

#include <gtest/gtest.h>

#include "oracle.hpp"
#include "sqlmend/errors.hpp"
#include "sqlmend/parser.hpp"
#include "sqlmend/structure.hpp"

using namespace sqlmend;

TEST(Structure, SlotsInSourceOrder) {
  auto s = extract_structure(parse("SELECT a, COUNT(*) FROM t WHERE b > 3 GROUP BY a ORDER BY a DESC LIMIT 2"));
  EXPECT_EQ(print_skeleton(s), "SELECT #1, #2 FROM #3 WHERE #4 #5 #6 GROUP BY #7 ORDER BY #8 #9 LIMIT #10");
  ASSERT_EQ(s.slots.size(), 10u);
  for (std::size_t i = 0; i < s.slots.size(); ++i) EXPECT_EQ(s.slots[i].id, static_cast<int>(i + 1));
  EXPECT_EQ(s.slot(1).role, SlotRole::SelectItem);
  EXPECT_EQ(s.slot(2).kind, ValueKind::Aggregate);
  EXPECT_EQ(s.slot(3).role, SlotRole::FromTable);
  EXPECT_EQ(s.slot(5).role, SlotRole::PredicateOp);
  EXPECT_EQ(s.slot(6).role, SlotRole::PredicateRhsLiteral);
  EXPECT_EQ(s.slot(6).lhs_slot, 4);
  EXPECT_EQ(s.slot(6).op_slot, 5);
  EXPECT_EQ(s.slot(9).role, SlotRole::OrderDir);
  EXPECT_EQ(s.slot(10).context, SlotContext::Limit);
  EXPECT_TRUE(s.fully_assigned());
  EXPECT_EQ(count_slots(s.skeleton), 10);
}

TEST(Structure, SetOperationArmScope) {
  auto s = extract_structure(parse("SELECT sid FROM students EXCEPT SELECT sid FROM participates"));
  ASSERT_EQ(s.slots.size(), 4u);
  EXPECT_EQ(s.slot(1).scope, 0);
  EXPECT_EQ(s.slot(3).scope, 1);
  EXPECT_EQ(s.slot(4).scope, 1);
}

TEST(Structure, NegationAndHaving) {
  auto s = extract_structure(parse("SELECT a FROM t WHERE NOT b = 1 GROUP BY a HAVING COUNT(*) > 1"));
  bool saw_negated = false, saw_having = false;
  for (const auto& slot : s.slots) {
    saw_negated = saw_negated || slot.negated;
    saw_having = saw_having || slot.in_having;
  }
  EXPECT_TRUE(saw_negated);
  EXPECT_TRUE(saw_having);
}

TEST(Structure, InstantiateRoundTrip) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 300; ++i) {
    Database db = oracle::random_database(rng, 1);
    Query q = oracle::random_query(rng, db);
    auto s = extract_structure(q);
    ASSERT_EQ(instantiate(s), q) << print(q);
    ASSERT_EQ(static_cast<int>(s.slots.size()), count_slots(q));
  }
}

TEST(Structure, EqualityIgnoresConstants) {
  auto a = extract_structure(parse("SELECT a FROM t WHERE b > 3 ORDER BY a ASC"));
  auto b = extract_structure(parse("SELECT c FROM u WHERE d = 'x' ORDER BY c DESC"));
  auto c = extract_structure(parse("SELECT a FROM t WHERE b > 3"));
  auto d = extract_structure(parse("SELECT COUNT(a) FROM t WHERE b > 3 ORDER BY a ASC"));
  auto e = extract_structure(parse("SELECT a, b FROM t WHERE b > 3 ORDER BY a ASC"));
  EXPECT_TRUE(structures_equal(a, b));
  EXPECT_FALSE(structures_equal(a, c));
  // A projection slot holds a column or an aggregate expression alike.
  EXPECT_TRUE(structures_equal(a, d));
  EXPECT_FALSE(structures_equal(a, e));
}

TEST(Structure, KindRules) {
  EXPECT_TRUE(kind_allowed(SlotContext::Projection, ValueKind::Column));
  EXPECT_TRUE(kind_allowed(SlotContext::Projection, ValueKind::Aggregate));
  EXPECT_TRUE(kind_allowed(SlotContext::From, ValueKind::Table));
  EXPECT_FALSE(kind_allowed(SlotContext::From, ValueKind::Column));
  EXPECT_TRUE(kind_allowed(SlotContext::Filter, ValueKind::Literal));
  EXPECT_TRUE(kind_allowed(SlotContext::Limit, ValueKind::Literal));
  EXPECT_FALSE(kind_allowed(SlotContext::Limit, ValueKind::Table));

  auto s = extract_structure(parse("SELECT a FROM t LIMIT 5"));
  const auto& limit = s.slot(3);
  EXPECT_TRUE(constant_fits(limit, Constant{Value{std::int64_t{2}}}));
  EXPECT_FALSE(constant_fits(limit, Constant{Value{std::int64_t{0}}}));
  EXPECT_FALSE(constant_fits(limit, Constant{Value{2.5}}));
  EXPECT_FALSE(constant_fits(limit, Constant{TableName{"t"}}));
}

TEST(Structure, InstantiateErrors) {
  auto s = extract_structure(parse("SELECT a FROM t"));
  auto missing = s.assignment;
  missing.erase(2);
  EXPECT_THROW(instantiate(s, missing), StructureError);
  auto wrong = s.assignment;
  wrong[2] = Constant{ColumnRef{"", "x"}};
  EXPECT_THROW(instantiate(s, wrong), StructureError);
  auto unknown = s.assignment;
  unknown[9] = Constant{TableName{"u"}};
  EXPECT_THROW(instantiate(s, unknown), StructureError);
}
