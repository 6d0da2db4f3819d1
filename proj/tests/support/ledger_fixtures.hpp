#pragma once

#include <string>
#include <utility>
#include <vector>

#include "wfl/ledger/ledger.hpp"

namespace wfl::testing {

inline ledger::AccountId aid(const std::string& label) { return ledger::AccountId::from_label(label); }

inline cas::Cid cid_of(const std::string& label) { return cas::Cid::of(as_bytes(label)); }

/// Ledger with an owner "owner" plus accounts given as (label, role, reputation),
/// built directly from state so tests can pin arbitrary reputations.
inline ledger::Ledger ledger_with(std::vector<std::tuple<std::string, ledger::Role, ledger::Reputation>> accounts,
                                  ledger::LedgerParams params = {}) {
    ledger::LedgerState s;
    s.params = params;
    auto owner = aid("owner");
    s.accounts.emplace(owner, ledger::Account{owner, ledger::Role::Owner, params.admin_initial_reputation});
    for (auto& [label, role, rep] : accounts) {
        auto id = aid(label);
        s.accounts.emplace(id, ledger::Account{id, role, rep});
    }
    return ledger::Ledger(std::move(s));
}

}  // namespace wfl::testing
