// accsim: identity-addressed chain-of-chains ledger simulator
// Copyright 2026 The accsim Authors.
// SPDX-License-Identifier: Apache-2.0
#include <accsim/authorization.hpp>

#include <gtest/gtest.h>

#include <map>
#include <random>

using namespace accsim;

namespace {

Hash32 key(const std::string& name) { return sha256("key:" + name); }

Signature direct(const std::string& name) { return Signature{key(name), {}, 0}; }

Signature via(std::vector<std::string> path, const std::string& name) {
    Signature s;
    s.signer_key_hash = key(name);
    for (const auto& p : path) s.delegation_path.push_back(Url::parse(p));
    return s;
}

KeyPage page_of_keys(std::initializer_list<std::string> names, std::uint32_t m) {
    KeyPage p;
    for (const auto& n : names) p.entries.push_back(KeyHashEntry{key(n)});
    p.threshold_m = m;
    p.validate();
    return p;
}

struct BookSet {
    std::map<std::string, KeyBook> books;

    KeyBook& add(const std::string& url) {
        KeyBook b;
        b.url = Url::parse(url);
        return books.emplace(b.url.render(), std::move(b)).first->second;
    }

    BookResolver resolver() const {
        return [this](const Url& u) -> const KeyBook* {
            auto it = books.find(u.render());
            return it == books.end() ? nullptr : &it->second;
        };
    }
};

}  // namespace

TEST(Threshold, SingleSignature) {
    KeyPage page = page_of_keys({"alice"}, 1);
    std::vector<Signature> sigs{direct("alice")};
    EXPECT_EQ(evaluate_threshold(page, sigs), ThresholdResult::Accepted);
    EXPECT_EQ(evaluate_threshold(page, {}), ThresholdResult::Pending);
}

TEST(Threshold, DistinctnessOfSigners) {
    KeyPage page = page_of_keys({"a", "b", "c"}, 2);
    std::vector<Signature> twice{direct("a"), direct("a")};
    EXPECT_EQ(evaluate_threshold(page, twice), ThresholdResult::Pending);
    std::vector<Signature> two{direct("a"), direct("c")};
    EXPECT_EQ(evaluate_threshold(page, two), ThresholdResult::Accepted);
}

TEST(Threshold, BruteForceEquivalenceSmallPages) {
    // all signer subsets of pages with n <= 4 key-hash entries, every m
    std::vector<std::string> names{"k0", "k1", "k2", "k3"};
    for (std::size_t n = 1; n <= 4; ++n) {
        for (std::uint32_t m = 1; m <= n; ++m) {
            KeyPage page;
            for (std::size_t i = 0; i < n; ++i) page.entries.push_back(KeyHashEntry{key(names[i])});
            page.threshold_m = m;
            for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
                std::vector<Signature> sigs;
                std::size_t count = 0;
                for (std::size_t i = 0; i < n; ++i)
                    if (mask & (1u << i)) {
                        sigs.push_back(direct(names[i]));
                        ++count;
                    }
                auto want = count >= m ? ThresholdResult::Accepted : ThresholdResult::Pending;
                ASSERT_EQ(evaluate_threshold(page, sigs), want)
                    << "n=" << n << " m=" << m << " mask=" << mask;
            }
        }
    }
}

TEST(Threshold, MultiBookSchemeFromTheOverviewFigure) {
    // origin page: 4 entries, threshold 3 — one of its own keys plus two
    // external authority books; signatures arrive from key 3 and both books
    BookSet set;
    KeyBook& a = set.add("acc://adi-a/book");
    KeyPage origin;
    origin.entries = {KeyHashEntry{key("a3")}, KeyHashEntry{key("a4")},
                      AuthorityEntry{Url::parse("acc://adi-b/book")},
                      AuthorityEntry{Url::parse("acc://adi-c/book")}};
    origin.threshold_m = 3;
    a.pages.push_back(origin);

    KeyBook& b = set.add("acc://adi-b/book");
    b.pages.push_back(page_of_keys({"b1"}, 1));
    KeyBook& c = set.add("acc://adi-c/book");
    c.pages.push_back(page_of_keys({"c1"}, 1));

    std::vector<Signature> sigs{direct("a3"), via({"acc://adi-b/book"}, "b1"),
                                via({"acc://adi-c/book"}, "c1")};
    EXPECT_EQ(evaluate_threshold(a.pages[0], sigs, set.resolver()), ThresholdResult::Accepted);

    // with only two of the three collected, still pending
    std::vector<Signature> partial{direct("a3"), via({"acc://adi-b/book"}, "b1")};
    EXPECT_EQ(evaluate_threshold(a.pages[0], partial, set.resolver()), ThresholdResult::Pending);
}

TEST(Threshold, DelegatedBookUsesItsOwnThreshold) {
    BookSet set;
    KeyBook& origin = set.add("acc://origin/book");
    KeyPage page;
    page.entries = {AuthorityEntry{Url::parse("acc://ext/book")}};
    page.threshold_m = 1;
    origin.pages.push_back(page);

    KeyBook& ext = set.add("acc://ext/book");
    ext.pages.push_back(page_of_keys({"x", "y"}, 2));

    std::vector<Signature> one{via({"acc://ext/book"}, "x")};
    EXPECT_EQ(evaluate_threshold(origin.pages[0], one, set.resolver()), ThresholdResult::Pending);
    std::vector<Signature> both{via({"acc://ext/book"}, "x"), via({"acc://ext/book"}, "y")};
    EXPECT_EQ(evaluate_threshold(origin.pages[0], both, set.resolver()),
              ThresholdResult::Accepted);
}

TEST(Threshold, DelegationCyclesTerminate) {
    BookSet set;
    KeyBook& a = set.add("acc://a/book");
    KeyPage pa;
    pa.entries = {AuthorityEntry{Url::parse("acc://b/book")}};
    a.pages.push_back(pa);
    KeyBook& b = set.add("acc://b/book");
    KeyPage pb;
    pb.entries = {AuthorityEntry{Url::parse("acc://a/book")}};
    b.pages.push_back(pb);

    std::vector<Signature> sigs{via({"acc://b/book", "acc://a/book", "acc://b/book"}, "x")};
    EXPECT_EQ(evaluate_threshold(a.pages[0], sigs, set.resolver()), ThresholdResult::Pending);
}

TEST(Threshold, MonotoneUnderAddedSignatures) {
    std::mt19937_64 rng(0xA0);
    std::vector<std::string> names{"s0", "s1", "s2", "s3", "s4", "s5"};
    for (int trial = 0; trial < 200; ++trial) {
        std::size_t n = 1 + rng() % 5;
        KeyPage page;
        for (std::size_t i = 0; i < n; ++i) page.entries.push_back(KeyHashEntry{key(names[i])});
        page.threshold_m = 1 + static_cast<std::uint32_t>(rng() % n);
        std::vector<Signature> sigs;
        bool accepted = false;
        for (int step = 0; step < 8; ++step) {
            sigs.push_back(direct(names[rng() % names.size()]));
            bool now = evaluate_threshold(page, sigs) == ThresholdResult::Accepted;
            ASSERT_FALSE(accepted && !now) << "acceptance regressed";
            accepted = now;
        }
    }
}

TEST(AuthorizeSignature, DirectOnSelectedPage) {
    BookSet set;
    KeyBook& book = set.add("acc://adi/book");
    book.pages.push_back(page_of_keys({"p0"}, 1));
    book.pages.push_back(page_of_keys({"p1a", "p1b"}, 2));

    PageSelector sel{Url::parse("acc://adi/book"), 1};
    EXPECT_EQ(authorize_signature(sel, direct("p1a"), set.resolver()), SignatureValidity::Valid);
    // key from a different page of the same book cannot sign for this page
    EXPECT_EQ(authorize_signature(sel, direct("p0"), set.resolver()), SignatureValidity::Invalid);
}

TEST(AuthorizeSignature, DelegatedThroughAuthorityEntry) {
    BookSet set;
    KeyBook& origin = set.add("acc://origin/book");
    KeyPage p;
    p.entries = {KeyHashEntry{key("own")}, AuthorityEntry{Url::parse("acc://ext/book")}};
    p.threshold_m = 1;
    origin.pages.push_back(p);
    KeyBook& ext = set.add("acc://ext/book");
    ext.pages.push_back(page_of_keys({"remote"}, 1));

    PageSelector sel{Url::parse("acc://origin/book"), 0};
    EXPECT_EQ(authorize_signature(sel, via({"acc://ext/book"}, "remote"), set.resolver()),
              SignatureValidity::Valid);
    EXPECT_EQ(authorize_signature(sel, via({"acc://ext/book"}, "stranger"), set.resolver()),
              SignatureValidity::Invalid);
    EXPECT_EQ(authorize_signature(sel, via({"acc://other/book"}, "remote"), set.resolver()),
              SignatureValidity::Invalid);
}

TEST(AuthorizeSignature, SelectorErrors) {
    BookSet set;
    KeyBook& book = set.add("acc://adi/book");
    book.pages.push_back(page_of_keys({"k"}, 1));
    try {
        authorize_signature({Url::parse("acc://ghost/book"), 0}, direct("k"), set.resolver());
        FAIL();
    } catch (const AuthException& e) {
        EXPECT_EQ(e.code(), AuthError::UnknownBook);
    }
    try {
        authorize_signature({Url::parse("acc://adi/book"), 5}, direct("k"), set.resolver());
        FAIL();
    } catch (const AuthException& e) {
        EXPECT_EQ(e.code(), AuthError::PageOutOfRange);
    }
}

TEST(PageManagement, PriorityOrdering) {
    EXPECT_EQ(check_page_management(0, 2), PageManagement::Allowed);
    EXPECT_EQ(check_page_management(2, 0), PageManagement::Denied);
    EXPECT_EQ(check_page_management(1, 1), PageManagement::Allowed);
}

TEST(UpdateKeyHash, ReplacesOwnEntryOnly) {
    KeyPage page = page_of_keys({"a", "b"}, 1);
    std::vector<Signature> sig_a{direct("a")};
    update_key_hash(page, sig_a, KeyHashEntry{key("a")}, key("a-rotated"));
    EXPECT_TRUE(std::get<KeyHashEntry>(page.entries[0]).key_hash == key("a-rotated"));

    std::vector<Signature> sig_b{direct("b")};
    try {
        update_key_hash(page, sig_b, KeyHashEntry{key("a-rotated")}, key("evil"));
        FAIL();
    } catch (const AuthException& e) {
        EXPECT_EQ(e.code(), AuthError::NotOwnEntry);
    }

    std::vector<Signature> two{direct("a-rotated"), direct("b")};
    try {
        update_key_hash(page, two, KeyHashEntry{key("a-rotated")}, key("x"));
        FAIL();
    } catch (const AuthException& e) {
        EXPECT_EQ(e.code(), AuthError::MultipleSignatures);
    }
}

TEST(UpdateKeyHash, AuthorityOwnedEntry) {
    KeyPage page;
    page.entries = {KeyHashEntry{key("a")}, AuthorityEntry{Url::parse("acc://ext/book")}};
    page.threshold_m = 1;
    std::vector<Signature> sig{via({"acc://ext/book"}, "remote")};
    update_key_hash(page, sig, AuthorityEntry{Url::parse("acc://ext/book")}, key("fresh"));
    EXPECT_TRUE(std::get<KeyHashEntry>(page.entries[1]).key_hash == key("fresh"));
}

TEST(Managed, TruthTableFromTheManagedFigure) {
    // TX1: main satisfied, manager required but silent — blocked
    EXPECT_EQ(check_managed(AuthRequirement::Accepted, AuthRequirement::Pending),
              ManagedDecision::Blocked);
    // TX2: no manager specified — executable on main alone
    EXPECT_EQ(check_managed(AuthRequirement::Accepted, AuthRequirement::NotRequired),
              ManagedDecision::Executable);
    // TX3: manager satisfied, main missing — blocked
    EXPECT_EQ(check_managed(AuthRequirement::Pending, AuthRequirement::Accepted),
              ManagedDecision::Blocked);
    // TX4: main not required, manager satisfied — executable
    EXPECT_EQ(check_managed(AuthRequirement::NotRequired, AuthRequirement::Accepted),
              ManagedDecision::Executable);
    // TX5: both satisfied — executable
    EXPECT_EQ(check_managed(AuthRequirement::Accepted, AuthRequirement::Accepted),
              ManagedDecision::Executable);
}

TEST(Managed, OpenAuthorizationCases) {
    // no manager, M = 0: anyone can execute, even with no signatures
    EXPECT_EQ(check_managed(AuthRequirement::NotRequired, AuthRequirement::NotRequired),
              ManagedDecision::Executable);
    // no manager, M > 0: main must accept
    EXPECT_EQ(check_managed(AuthRequirement::Pending, AuthRequirement::NotRequired),
              ManagedDecision::Blocked);
    // manager specified, M = 0: manager alone decides
    EXPECT_EQ(check_managed(AuthRequirement::NotRequired, AuthRequirement::Pending),
              ManagedDecision::Blocked);
    // manager specified, M > 0: both must accept
    EXPECT_EQ(check_managed(AuthRequirement::Pending, AuthRequirement::Accepted),
              ManagedDecision::Blocked);
}

TEST(Envelope, HashBindsTransactionAndSignatures) {
    Hash32 tx = sha256("tx");
    auto e1 = Envelope::make(tx, {direct("a")}, {Url::parse("acc://adi/book"), 0});
    auto e2 = Envelope::make(tx, {direct("b")}, {Url::parse("acc://adi/book"), 0});
    auto e3 = Envelope::make(sha256("other"), {direct("a")}, {Url::parse("acc://adi/book"), 0});
    EXPECT_NE(e1.envelope_hash, e2.envelope_hash);
    EXPECT_NE(e1.envelope_hash, e3.envelope_hash);
    auto sig_bytes = serialize_signatures(e1.signatures);
    EXPECT_EQ(e1.envelope_hash, hash_pair(tx, sha256(sig_bytes.data(), sig_bytes.size())));
}

TEST(KeyPage, ValidationRules) {
    KeyPage empty;
    EXPECT_THROW(empty.validate(), AuthException);
    KeyPage over;
    over.entries = {KeyHashEntry{key("a")}};
    over.threshold_m = 2;
    EXPECT_THROW(over.validate(), AuthException);
    KeyPage dup;
    dup.entries = {KeyHashEntry{key("a")}, KeyHashEntry{key("a")}};
    dup.threshold_m = 1;
    EXPECT_THROW(dup.validate(), AuthException);
}
