#include <algorithm>

#include "doctest.h"
#include "noesis/lattice.hpp"
#include "support.hpp"

using namespace noesis;
using namespace noesis::testing;

namespace {

std::vector<std::string> intent_names(const FormalContext& ctx, const Concept& c) {
  return ctx.attribute_names(c.intent);
}

std::string golden_path(const std::string& name) { return std::string(NOESIS_GOLDEN_DIR) + "/" + name; }

}  // namespace

TEST_SUITE("derivation") {
  TEST_CASE("digit examples") {
    auto ctx = digits();
    CHECK(derive_extent(ctx, names({"Square"})) == names({"One", "Four", "Nine"}));
    CHECK(derive_extent(ctx, names({"Composite", "Even"})) == names({"Four", "Six", "Eight"}));
    CHECK(derive_intent(ctx, names({"Two"})) == names({"Even", "Prime"}));
    CHECK(derive_intent(ctx, names({"One", "Nine"})) == names({"Odd", "Square"}));
    CHECK(closure(ctx, names({"Prime", "Square"})) == ctx.attributes());
    CHECK(closure(ctx, names({"Square"})) == names({"Square"}));
    CHECK(closure(ctx, names({"Composite", "Odd"})) == names({"Composite", "Odd", "Square"}));
  }

  TEST_CASE("empty arguments") {
    auto ctx = digits();
    CHECK(derive_extent(ctx, std::vector<std::string>{}) == ctx.objects());
    CHECK(derive_intent(ctx, std::vector<std::string>{}) == ctx.attributes());
    CHECK_THROWS_KIND(derive_extent(ctx, names({"Negative"})), ErrorKind::UnknownAttribute);
    CHECK_THROWS_KIND(derive_intent(ctx, names({"Ten"})), ErrorKind::UnknownObject);
  }

  TEST_CASE("property: Galois connection laws") {
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 1000; ++trial) {
      auto ctx = random_context(rng);
      auto t = table_of(ctx);
      const std::size_t n = ctx.object_count(), m = ctx.attribute_count();
      for (int k = 0; k < 4; ++k) {
        auto a = set_of<ObjectTag>(n, random_mask(rng, n));
        auto b = set_of<AttributeTag>(m, random_mask(rng, m));
        auto a2 = a | set_of<ObjectTag>(n, random_mask(rng, n));
        auto b2 = b | set_of<AttributeTag>(m, random_mask(rng, m));
        REQUIRE(mask_of(derive_intent(ctx, a)) == oracle_intent(t, mask_of(a)));
        REQUIRE(mask_of(derive_extent(ctx, b)) == oracle_extent(t, mask_of(b)));
        // Antitone.
        REQUIRE(derive_intent(ctx, a2).is_subset_of(derive_intent(ctx, a)));
        REQUIRE(derive_extent(ctx, b2).is_subset_of(derive_extent(ctx, b)));
        // Extensive and idempotent.
        REQUIRE(a.is_subset_of(derive_extent(ctx, derive_intent(ctx, a))));
        REQUIRE(b.is_subset_of(closure(ctx, b)));
        REQUIRE(closure(ctx, closure(ctx, b)) == closure(ctx, b));
        // A' = A'''.
        REQUIRE(derive_intent(ctx, derive_extent(ctx, derive_intent(ctx, a))) == derive_intent(ctx, a));
        // Galois: A subset of B' iff B subset of A'.
        REQUIRE(a.is_subset_of(derive_extent(ctx, b)) == b.is_subset_of(derive_intent(ctx, a)));
      }
    }
  }
}

TEST_SUITE("lattice") {
  TEST_CASE("digits lattice has fourteen concepts in canonical order") {
    auto ctx = digits();
    auto lat = enumerate_concepts(ctx);
    REQUIRE(lat.size() == 14);
    std::vector<std::vector<std::string>> intents;
    for (const auto& c : lat.concepts()) intents.push_back(intent_names(ctx, c));
    std::vector<std::vector<std::string>> expected = {
        {},
        {"Composite"},
        {"Even"},
        {"Odd"},
        {"Prime"},
        {"Square"},
        {"Composite", "Even"},
        {"Composite", "Square"},
        {"Even", "Prime"},
        {"Odd", "Prime"},
        {"Odd", "Square"},
        {"Composite", "Even", "Square"},
        {"Composite", "Odd", "Square"},
        {"Composite", "Even", "Odd", "Prime", "Square"},
    };
    CHECK(intents == expected);
    CHECK(lat[lat.top()].extent == ctx.all_objects());
    CHECK(lat[lat.bottom()].extent.none());
    auto sq = lat.find(ctx.attribute_set({"Square"}));
    REQUIRE(sq);
    CHECK(ctx.object_names(lat[*sq].extent) == names({"One", "Four", "Nine"}));
    CHECK_FALSE(lat.find(ctx.attribute_set({"Prime", "Square"})));
  }

  TEST_CASE("degenerate contexts") {
    auto none = enumerate_concepts(digit_attributes());
    REQUIRE(none.size() == 1);
    CHECK(none[0].intent.count() == 5);
    CHECK(none.hasse().empty());

    auto one = enumerate_concepts(add_object(digit_attributes(), "One", names({"Odd", "Square"}), Granule{0}));
    REQUIRE(one.size() == 2);
    CHECK(one.hasse() == std::vector<HasseEdge>{{1, 0}});

    auto full_row = enumerate_concepts(new_context({"x"}, {{"d", {"a", "b"}}}, {{true, true}}));
    CHECK(full_row.size() == 1);
  }

  TEST_CASE("property: enumeration matches the powerset oracle") {
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 1000; ++trial) {
      auto ctx = random_context(rng);
      auto t = table_of(ctx);
      auto expected = powerset_concepts(t);
      auto par = enumerate_concepts(ctx);
      auto ser = enumerate_concepts_serial(ctx);
      REQUIRE(concept_masks(par) == expected);
      REQUIRE(par.size() == expected.size());
      REQUIRE(par.concepts() == ser.concepts());
      REQUIRE(par.hasse() == ser.hasse());
      for (std::size_t i = 1; i < par.size(); ++i) REQUIRE(canonical_less(par[i - 1], par[i]));
    }
  }

  TEST_CASE("property: raw kernels find the same concept sets") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 300; ++trial) {
      auto ctx = random_context(rng);
      auto a = concepts_next_closure(ctx), b = concepts_cbo_parallel(ctx);
      std::sort(a.begin(), a.end(), canonical_less);
      std::sort(b.begin(), b.end(), canonical_less);
      REQUIRE(a == b);
    }
  }

  TEST_CASE("property: Hasse edges are exactly the covering pairs") {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 1000; ++trial) {
      auto ctx = random_context(rng);
      auto lat = enumerate_concepts(ctx);
      std::vector<Mask> extents;
      for (const auto& c : lat.concepts()) extents.push_back(mask_of(c.extent));
      auto expected = covering_oracle(extents);
      std::set<HasseEdge> got(lat.hasse().begin(), lat.hasse().end());
      REQUIRE(got == expected);
      REQUIRE(got.size() == lat.hasse().size());
      REQUIRE(covering_edges_serial(ctx, lat.concepts()) == covering_edges_parallel(ctx, lat.concepts()));
    }
  }

  TEST_CASE("property: incremental insertion in random orders matches a rebuild") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 1000; ++trial) {
      auto ctx = random_context(rng);
      std::vector<std::size_t> order(ctx.object_count());
      for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
      std::shuffle(order.begin(), order.end(), rng);

      auto lat = enumerate_concepts(FormalContext::attributes_only(ctx.dimensions()));
      for (auto g : order) lat = insert_object(lat, ctx.object_name(g), ctx.row(g), Granule{0});
      auto rebuilt = enumerate_concepts(lat.context());
      REQUIRE(lat.concepts() == rebuilt.concepts());
      REQUIRE(lat.hasse() == rebuilt.hasse());
      std::set<std::pair<Mask, Mask>> intents_only;
      for (const auto& [e, i] : concept_masks(lat)) intents_only.emplace(0, i);
      std::set<std::pair<Mask, Mask>> oracle_intents;
      for (const auto& [e, i] : powerset_concepts(table_of(ctx))) oracle_intents.emplace(0, i);
      REQUIRE(intents_only == oracle_intents);
    }
  }

  TEST_CASE("inserting the nine digits one granule at a time ends with 14 concepts") {
    auto full = digits();
    auto lat = enumerate_concepts(FormalContext::attributes_only(full.dimensions()));
    CHECK(lat.size() == 1);
    for (std::size_t g = 0; g < full.object_count(); ++g)
      lat = insert_object(lat, full.object_name(g), full.row(g), Granule{g + 1});
    CHECK(lat.context().object_count() == 9);
    CHECK(lat.size() == 14);
    CHECK(lat.concepts() == enumerate_concepts(full).concepts());
  }

  TEST_CASE("insert_object reports the context errors") {
    auto lat = enumerate_concepts(digits());
    CHECK_THROWS_KIND(insert_object(lat, "One", names({"Odd"}), Granule{1}), ErrorKind::DuplicateName);
    CHECK_THROWS_KIND(insert_object(lat, "Ten", names({"Negative"}), Granule{1}), ErrorKind::UnknownAttribute);
  }
}

TEST_SUITE("implications") {
  TEST_CASE("digit verdicts") {
    auto ctx = digits();
    auto prime_even = Implication::from_names(ctx, names({"Prime"}), names({"Even"}));
    CHECK(holds(ctx, prime_even) == Verdict{VerdictKind::Fails, "Three"});
    auto vacuous = Implication::from_names(ctx, names({"Prime", "Square"}), names({"Composite", "Even", "Odd"}));
    CHECK(holds(ctx, vacuous).kind == VerdictKind::Vacuous);
    CHECK(holds(ctx, vacuous).satisfied());
    auto holds_imp = Implication::from_names(ctx, names({"Composite", "Odd"}), names({"Square"}));
    CHECK(holds(ctx, holds_imp) == Verdict{VerdictKind::Holds, std::nullopt});
    CHECK(to_string(VerdictKind::Vacuous) == "vacuous");
  }

  TEST_CASE("implication construction errors") {
    auto ctx = digits();
    CHECK_THROWS_KIND(Implication::from_names(ctx, names({"Prime"}), {}), ErrorKind::ValidationError);
    CHECK_THROWS_KIND(Implication::from_names(ctx, names({"Prime"}), names({"Negative"})), ErrorKind::UnknownAttribute);
    auto narrow = Implication::make(AttributeSet(2), AttributeSet::of(2, {0}));
    CHECK_THROWS_KIND(holds(ctx, narrow), ErrorKind::BasisMismatch);
  }

  TEST_CASE("property: verdict agrees with a literal scan") {
    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 1000; ++trial) {
      auto ctx = random_context(rng);
      auto t = table_of(ctx);
      const std::size_t m = ctx.attribute_count();
      Mask p = random_mask(rng, m), c = random_mask(rng, m);
      if (c == 0) c = 1;
      auto v = holds(ctx, Implication::make(set_of<AttributeTag>(m, p), set_of<AttributeTag>(m, c)));
      REQUIRE(v.satisfied() == oracle_implication(t, p, c));
      const bool nobody = oracle_extent(t, p) == 0;
      REQUIRE((v.kind == VerdictKind::Vacuous) == nobody);
      if (!v.satisfied()) {
        // First violating object in declaration order.
        std::size_t first = 0;
        while (!((oracle_extent(t, p) >> first & 1) && (oracle_extent(t, c) >> first & 1) == 0)) ++first;
        REQUIRE(v.counterexample == ctx.object_name(first));
      }
    }
  }

  TEST_CASE("implication closure applies rules to a fixpoint") {
    auto a = Implication::make(AttributeSet::of(4, {0}), AttributeSet::of(4, {1}));
    auto b = Implication::make(AttributeSet::of(4, {1}), AttributeSet::of(4, {2}));
    std::vector<Implication> rules{b, a};
    CHECK(implication_closure(AttributeSet::of(4, {0}), rules) == AttributeSet::of(4, {0, 1, 2}));
    CHECK(implication_closure(AttributeSet::of(4, {3}), rules) == AttributeSet::of(4, {3}));
  }
}

TEST_SUITE("lattice export") {
  TEST_CASE("DOT output matches the frozen files") {
    auto lat = enumerate_concepts(digits());
    CHECK(export_dot(lat, LabelMode::Reduced) == read_file(golden_path("digits_reduced.dot")));
    CHECK(export_dot(lat, LabelMode::Full) == read_file(golden_path("digits_full.dot")));
  }

  TEST_CASE("reduced labels name each attribute and object once") {
    auto lat = enumerate_concepts(digits());
    auto dot = export_dot(lat, LabelMode::Reduced);
    auto occurrences = [&](const std::string& word) {
      std::size_t n = 0;
      for (auto p = dot.find(word); p != std::string::npos; p = dot.find(word, p + 1)) ++n;
      return n;
    };
    CHECK(occurrences("Odd") == 1);
    CHECK(occurrences("Square") == 1);
    CHECK(occurrences("Nine") == 1);
    CHECK(occurrences(" -> ") == lat.hasse().size());
  }

  TEST_CASE("lattice JSON") {
    auto lat = enumerate_concepts(digits());
    auto text = lattice_json(lat);
    CHECK(text == read_file(golden_path("digits_lattice.json")));
    CHECK(text.rfind("{\"concepts\":[{\"extent\":[\"One\",", 0) == 0);
  }
}
