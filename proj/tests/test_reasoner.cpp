#include <doctest.h>

#include <ern/ern.hpp>

#include <string>
#include <utility>
#include <vector>

using ern::LogicExpr;
using ern::RecordState;

namespace {

// All test vertices use impact category 8 (weight 0), so risk weight is
// (f + p) / 3 and easy to pick: f = p = 3w/2 gives weight w.
void add_weighted(ern::Network& net, const std::string& id, double weight) {
    const double fp = weight * 3.0 / 2.0;
    net.add_vertex(id, "node-" + id, ern::Vulnerability{"vuln-" + id, "", 8, fp}, fp);
}

// Linear chain a -> b -> c ... with per-vertex weights.
ern::Network linear_net(const std::vector<std::pair<std::string, double>>& stages,
                        std::size_t capacity = 8) {
    ern::Network net(capacity);
    for (const auto& [id, w] : stages) add_weighted(net, id, w);
    for (std::size_t i = 1; i < stages.size(); ++i) {
        const auto& link = net.add_link(stages[i - 1].first, stages[i].first);
        net.set_logic(stages[i].first, LogicExpr::leaf(link.id));
    }
    net.finalize();
    return net;
}

ern::Evidence ev(const std::string& vertex, ern::TimestampMs ts) {
    ern::Evidence e;
    e.ts = ts;
    e.mapped_vertex = vertex;
    e.signature = "test";
    return e;
}

ern::Evidence unmapped_ev(ern::TimestampMs ts) {
    ern::Evidence e;
    e.ts = ts;
    e.signature = "test";
    return e;
}

const ern::EvidenceRecord& only_record(const ern::ReasonerSession& s,
                                       const std::string& vertex) {
    const ern::RecordQueue& q = s.network().vertex(vertex).queue;
    REQUIRE(q.size() == 1);
    return q.at(0);
}

}  // namespace

TEST_CASE("timed reasoning links each evidence to its satisfied parents") {
    ern::Network net = linear_net({{"a", 0.5}, {"b", 0.2}, {"c", 0.3}});
    ern::ReasonerSession s(std::move(net), ern::ReasonMode::Timed);

    s.process(ev("a", 1000));
    s.process(ev("b", 2000));
    s.process(ev("c", 3000));

    CHECK(only_record(s, "a").state == RecordState::Start);
    CHECK(only_record(s, "b").state == RecordState::Intermediate);
    CHECK(only_record(s, "c").state == RecordState::Intermediate);
    CHECK(only_record(s, "a").child_refs ==
          std::vector<ern::RecordRef>{{"b", only_record(s, "b").serial}});

    const auto chains = s.generate_chains();
    REQUIRE(chains.size() == 1);
    CHECK(chains[0].records.size() == 3);
    CHECK(chains[0].confidence == 1.0);
    CHECK(chains[0].real_weight == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(chains[0].virtual_weight == 0.0);
    CHECK(s.stats().processed == 3);
    CHECK(s.stats().virtual_records == 0);
}

TEST_CASE("timed reasoning starts a new chain when the logic is unsatisfied") {
    // c requires both parents: AND(a=>c, b=>c).
    ern::Network net(8);
    add_weighted(net, "a", 0.5);
    add_weighted(net, "b", 0.2);
    add_weighted(net, "c", 0.3);
    const auto& la = net.add_link("a", "c");
    const auto& lb = net.add_link("b", "c");
    net.set_logic("c", LogicExpr::all_of({LogicExpr::leaf(la.id), LogicExpr::leaf(lb.id)}));
    net.finalize();
    ern::ReasonerSession s(std::move(net), ern::ReasonMode::Timed);

    SUBCASE("one parent is not enough") {
        s.process(ev("a", 1000));
        s.process(ev("c", 2000));
        CHECK(only_record(s, "c").state == RecordState::Start);
        CHECK(s.generate_chains().size() == 2);  // two unconnected starts
    }

    SUBCASE("both parents reference the intermediate") {
        s.process(ev("a", 1000));
        s.process(ev("b", 2000));
        s.process(ev("c", 3000));
        const auto& rc = only_record(s, "c");
        CHECK(rc.state == RecordState::Intermediate);
        const ern::RecordRef ref{"c", rc.serial};
        CHECK(only_record(s, "a").child_refs == std::vector<ern::RecordRef>{ref});
        CHECK(only_record(s, "b").child_refs == std::vector<ern::RecordRef>{ref});

        // Two starts share the suffix; both chains carry the intermediate.
        const auto chains = s.generate_chains();
        REQUIRE(chains.size() == 2);
        CHECK(chains[0].records.size() == 2);
        CHECK(chains[1].records.size() == 2);
        // Equal confidence, so the earlier root sorts first.
        CHECK(chains[0].records.front().vertex == "a");
        CHECK(chains[1].records.front().vertex == "b");
    }
}

TEST_CASE("timed reasoning rejects timestamp regressions") {
    ern::Network net = linear_net({{"a", 0.5}, {"b", 0.2}});
    ern::ReasonerSession s(std::move(net), ern::ReasonMode::Timed);
    s.process(ev("a", 5000));
    s.process(ev("a", 5000));  // equal is fine
    CHECK_THROWS_AS(s.process(ev("b", 4999)), ern::ContractError);
}

TEST_CASE("untimed reasoning accepts timestamp regressions") {
    ern::Network net = linear_net({{"a", 0.5}, {"b", 0.2}});
    ern::ReasonerSession s(std::move(net), ern::ReasonMode::Untimed);
    s.process(ev("a", 5000));
    CHECK_NOTHROW(s.process(ev("b", 100)));
    CHECK(s.stats().processed == 2);
}

TEST_CASE("unmapped evidence is counted and otherwise ignored") {
    ern::Network net = linear_net({{"a", 0.5}});
    ern::ReasonerSession s(std::move(net), ern::ReasonMode::Untimed);
    s.process(unmapped_ev(1000));
    CHECK(s.stats().processed == 0);
    CHECK(s.stats().skipped_unmapped == 1);
    CHECK(s.network().vertex("a").queue.empty());
    CHECK(s.generate_chains().empty());
    CHECK_THROWS_AS(s.process(ev("ghost", 2000)), ern::NotFoundError);
}

TEST_CASE("untimed reasoning synthesizes a missing start parent") {
    ern::Network net = linear_net({{"a", 0.5}, {"b", 0.2}});
    ern::ReasonerSession s(std::move(net), ern::ReasonMode::Untimed);

    s.process(ev("b", 7000));

    const auto& ra = only_record(s, "a");
    const auto& rb = only_record(s, "b");
    CHECK(ra.state == RecordState::StartVirtual);
    CHECK(ra.ts == 7000);  // inherits the triggering evidence ts
    CHECK(ra.weight == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(rb.state == RecordState::Intermediate);
    CHECK(ra.child_refs == std::vector<ern::RecordRef>{{"b", rb.serial}});
    CHECK(s.stats().virtual_records == 1);

    const auto chains = s.generate_chains();
    REQUIRE(chains.size() == 1);
    CHECK(chains[0].records.size() == 2);
    CHECK(chains[0].virtual_weight == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(chains[0].confidence == doctest::Approx(0.2 / 0.7).epsilon(1e-9));

    SUBCASE("the real step later promotes the virtual record in place") {
        const auto serial_before = ra.serial;
        s.process(ev("a", 9000));

        const auto& promoted = only_record(s, "a");  // same single slot
        CHECK(promoted.serial == serial_before);
        CHECK(promoted.state == RecordState::Start);
        CHECK(promoted.ts == 9000);
        CHECK(promoted.child_refs == std::vector<ern::RecordRef>{{"b", rb.serial}});
        CHECK(s.stats().promotions == 1);

        const auto after = s.generate_chains();
        REQUIRE(after.size() == 1);
        CHECK(after[0].confidence == 1.0);
        CHECK(after[0].virtual_weight == 0.0);
    }
}

TEST_CASE("untimed reasoning chains a virtual intermediate backwards") {
    ern::Network net = linear_net({{"a", 0.5}, {"b", 0.2}, {"c", 0.3}});
    ern::ReasonerSession s(std::move(net), ern::ReasonMode::Untimed);

    s.process(ev("a", 1000));
    s.process(ev("c", 2000));  // b never reported

    const auto& ra = only_record(s, "a");
    const auto& rb = only_record(s, "b");
    const auto& rc = only_record(s, "c");
    CHECK(rb.state == RecordState::IntermediateVirtual);
    CHECK(rb.ts == 2000);
    // Back-filled: a's record points at the virtual, the virtual at c.
    CHECK(ra.child_refs == std::vector<ern::RecordRef>{{"b", rb.serial}});
    CHECK(rb.child_refs == std::vector<ern::RecordRef>{{"c", rc.serial}});

    const auto chains = s.generate_chains();
    REQUIRE(chains.size() == 1);
    CHECK(chains[0].records.size() == 3);
    CHECK(chains[0].records.front().vertex == "a");
    CHECK(chains[0].real_weight == doctest::Approx(0.8).epsilon(1e-9));
    CHECK(chains[0].virtual_weight == doctest::Approx(0.2).epsilon(1e-9));
    CHECK(chains[0].confidence == doctest::Approx(0.8).epsilon(1e-9));

    SUBCASE("promoting the virtual intermediate keeps its wiring") {
        s.process(ev("b", 3000));
        const auto& promoted = only_record(s, "b");
        CHECK(promoted.state == RecordState::Intermediate);
        CHECK(promoted.serial == rb.serial);
        CHECK(promoted.child_refs == std::vector<ern::RecordRef>{{"c", rc.serial}});
        CHECK(s.stats().promotions == 1);
        const auto after = s.generate_chains();
        REQUIRE(after.size() == 1);
        CHECK(after[0].confidence == 1.0);
    }
}

TEST_CASE("untimed reasoning refuses to invent more than one step") {
    // c needs a AND b; neither was seen. No single virtual parent satisfies
    // the logic, so the evidence opens a new chain instead.
    ern::Network net(8);
    add_weighted(net, "a", 0.5);
    add_weighted(net, "b", 0.2);
    add_weighted(net, "c", 0.3);
    const auto& la = net.add_link("a", "c");
    const auto& lb = net.add_link("b", "c");
    net.set_logic("c", LogicExpr::all_of({LogicExpr::leaf(la.id), LogicExpr::leaf(lb.id)}));
    net.finalize();
    ern::ReasonerSession s(std::move(net), ern::ReasonMode::Untimed);

    s.process(ev("c", 1000));
    CHECK(only_record(s, "c").state == RecordState::Start);
    CHECK(s.network().vertex("a").queue.empty());
    CHECK(s.network().vertex("b").queue.empty());
    CHECK(s.stats().virtual_records == 0);
}

TEST_CASE("untimed reasoning will not chain two virtuals") {
    // a -> b -> c with only c reported: the candidate b would itself need a
    // virtual a, so nothing is synthesized.
    ern::Network net = linear_net({{"a", 0.5}, {"b", 0.2}, {"c", 0.3}});
    ern::ReasonerSession s(std::move(net), ern::ReasonMode::Untimed);

    s.process(ev("c", 1000));
    CHECK(only_record(s, "c").state == RecordState::Start);
    CHECK(s.network().vertex("a").queue.empty());
    CHECK(s.network().vertex("b").queue.empty());
    CHECK(s.stats().virtual_records == 0);
}

TEST_CASE("virtual parent candidates are tried in ascending vertex order") {
    // Either parent alone satisfies OR logic; a1 sorts before a2.
    ern::Network net(8);
    add_weighted(net, "a1", 0.5);
    add_weighted(net, "a2", 0.5);
    add_weighted(net, "c", 0.3);
    const auto& l1 = net.add_link("a1", "c");
    const auto& l2 = net.add_link("a2", "c");
    net.set_logic("c", LogicExpr::any_of({LogicExpr::leaf(l1.id), LogicExpr::leaf(l2.id)}));
    net.finalize();
    ern::ReasonerSession s(std::move(net), ern::ReasonMode::Untimed);

    s.process(ev("c", 1000));
    CHECK(only_record(s, "a1").state == RecordState::StartVirtual);
    CHECK(s.network().vertex("a2").queue.empty());
    CHECK(s.stats().virtual_records == 1);
}

TEST_CASE("a candidate that cannot satisfy the logic is passed over") {
    // c's logic is (a & x) | b with all three parents silent. Forcing a
    // leaves the conjunction broken, so the synthesizer settles on b.
    ern::Network net(8);
    add_weighted(net, "a", 0.5);
    add_weighted(net, "b", 0.2);
    add_weighted(net, "c", 0.3);
    add_weighted(net, "x", 0.4);
    const auto& la = net.add_link("a", "c");
    const auto& lb = net.add_link("b", "c");
    const auto& lx = net.add_link("x", "c");
    net.set_logic("c", LogicExpr::any_of(
                           {LogicExpr::all_of({LogicExpr::leaf(la.id), LogicExpr::leaf(lx.id)}),
                            LogicExpr::leaf(lb.id)}));
    net.finalize();
    ern::ReasonerSession s(std::move(net), ern::ReasonMode::Untimed);

    s.process(ev("c", 1000));
    CHECK(s.network().vertex("a").queue.empty());
    CHECK(s.network().vertex("x").queue.empty());
    CHECK(only_record(s, "b").state == RecordState::StartVirtual);
    CHECK(only_record(s, "c").state == RecordState::Intermediate);
}

TEST_CASE("chain walks skip refs to evicted records") {
    // Capacity 1: the second intermediate at b evicts the first, leaving a
    // dangling ref in a's record.
    ern::Network net = linear_net({{"a", 0.5}, {"b", 0.2}}, 1);
    ern::ReasonerSession s(std::move(net), ern::ReasonMode::Untimed);

    s.process(ev("a", 1000));
    s.process(ev("b", 2000));
    s.process(ev("b", 3000));

    const auto& ra = only_record(s, "a");
    CHECK(ra.child_refs.size() == 2);  // one live, one dangling

    const auto chains = s.generate_chains();
    REQUIRE(chains.size() == 1);
    REQUIRE(chains[0].records.size() == 2);
    CHECK(chains[0].records[1].record.ts == 3000);  // the surviving intermediate
}

TEST_CASE("chain generation with no start records yields nothing") {
    ern::Network net = linear_net({{"a", 0.5}, {"b", 0.2}});
    const ern::ReasonerSession s(std::move(net), ern::ReasonMode::Untimed);
    CHECK(s.generate_chains().empty());
}

TEST_CASE("chains sort by confidence, then age") {
    // Two independent components: x -> y (y missing, so a virtual drags the
    // confidence down) and p -> q fully observed.
    ern::Network net(8);
    add_weighted(net, "x", 0.5);
    add_weighted(net, "y", 0.2);
    add_weighted(net, "p", 0.4);
    add_weighted(net, "q", 0.4);
    const auto& lxy = net.add_link("x", "y");
    const auto& lpq = net.add_link("p", "q");
    net.set_logic("y", LogicExpr::leaf(lxy.id));
    net.set_logic("q", LogicExpr::leaf(lpq.id));
    net.finalize();
    ern::ReasonerSession s(std::move(net), ern::ReasonMode::Untimed);

    s.process(ev("y", 1000));  // virtual x, confidence 0.2/0.7
    s.process(ev("p", 2000));
    s.process(ev("q", 3000));  // confidence 1.0

    const auto chains = s.generate_chains();
    REQUIRE(chains.size() == 2);
    CHECK(chains[0].confidence == 1.0);
    CHECK(chains[0].records.front().vertex == "p");
    CHECK(chains[1].records.front().vertex == "x");
    CHECK(chains[1].confidence == doctest::Approx(0.2 / 0.7).epsilon(1e-9));
}

TEST_CASE("chain confidence is the real share of the total weight") {
    auto rec = [](double w, RecordState st) {
        ern::ChainRecord r;
        r.vertex = "v";
        r.record.weight = w;
        r.record.state = st;
        return r;
    };

    ern::EvidenceChain chain;
    chain.records = {rec(0.6, RecordState::Start),
                     rec(0.2, RecordState::IntermediateVirtual)};
    CHECK(ern::chain_confidence(chain) == doctest::Approx(0.75).epsilon(1e-12));

    chain.records = {rec(0.6, RecordState::Start), rec(0.4, RecordState::Intermediate)};
    CHECK(ern::chain_confidence(chain) == 1.0);  // exact, no division

    chain.records = {rec(0.5, RecordState::StartVirtual)};
    CHECK(ern::chain_confidence(chain) == 0.0);

    chain.records.clear();
    CHECK_THROWS_AS(ern::chain_confidence(chain), ern::ValidationError);
}

TEST_CASE("sessions require a finalized network") {
    ern::Network net(8);
    add_weighted(net, "a", 0.5);
    CHECK_THROWS_AS(ern::ReasonerSession(std::move(net), ern::ReasonMode::Timed),
                    ern::ContractError);
}
