#include "ponzi/synthetic.hpp"

#include <array>

#include "ponzi/rng.hpp"

namespace ponzi {

namespace {

template <std::size_t N>
const char* pick(Rng& rng, const std::array<const char*, N>& pool) {
    return pool[static_cast<std::size_t>(rng.next_index(N))];
}

std::string num(Rng& rng, int lo, int hi) {
    return std::to_string(rng.next_range(static_cast<std::uint64_t>(lo), static_cast<std::uint64_t>(hi)));
}

// Per-contract identifier salt. Distinct salts keep the hashed token
// vocabularies of any two contracts mostly disjoint, which is what the
// contrastive corpus needs: views of one contract share its salt, other
// contracts do not.
std::string salt(Rng& rng) {
    static const char* hex = "0123456789abcdef";
    std::string s = "_";
    for (int i = 0; i < 4; ++i) s += hex[rng.next_u64() & 0xf];
    return s;
}

// Extra salted state declarations. They pad each contract with tokens unique
// to it, which keeps cross-contract feature overlap away from one.
std::string filler_vars(Rng& rng, const std::string& tag) {
    static const std::array<const char*, 8> kFillerWords = {
        "counter", "limit", "window", "epoch", "nonce", "quota", "rate", "basis"};
    std::string out;
    int count = 6 + static_cast<int>(rng.next_index(6));
    for (int i = 0; i < count; ++i) {
        out += "    uint ";
        out += pick(rng, kFillerWords);
        out += std::to_string(i) + tag + " = " + num(rng, 1, 100000) + ";\n";
    }
    return out;
}

// -- ponzi-like templates -----------------------------------------------------

const std::array<const char*, 6> kPonziNames = {"ChainFund",  "PyramidPool", "QuickReturns",
                                                "GoldLadder", "DoubleUp",    "EasyDividend"};
const std::array<const char*, 4> kInvestorWords = {"investors", "backers", "players", "depositors"};
const std::array<const char*, 4> kDepositWords = {"deposits", "stakes", "contributions", "entries"};
const std::array<const char*, 4> kPayoutWords = {"payout", "dividend", "profitShare", "reward"};
const std::array<const char*, 4> kPoolWords = {"totalPool", "bank", "fundSize", "jackpot"};

std::string ponzi_chain(Rng& rng, int index) {
    std::string tag = salt(rng);
    std::string name = std::string(pick(rng, kPonziNames)) + std::to_string(index);
    std::string investors = pick(rng, kInvestorWords) + tag;
    std::string deposits = pick(rng, kDepositWords) + tag;
    std::string payout = pick(rng, kPayoutWords) + tag;
    std::string pool = pick(rng, kPoolWords) + tag;
    std::string cursor = "cursor" + tag;
    std::string fee = "feeRate" + tag;
    std::string join = "join" + tag;
    std::string owed = "owed" + tag;
    std::string multiplier = num(rng, 11, 19);

    std::string src;
    src += "contract " + name + " {\n";
    src += "    address[] " + investors + ";\n";
    src += "    uint[] " + deposits + ";\n";
    src += "    uint " + cursor + ";\n";
    src += "    uint " + pool + ";\n";
    src += "    uint " + fee + " = " + num(rng, 10, 40) + ";\n";
    src += filler_vars(rng, tag);
    src += "    function " + join + "() public payable returns (bool) {\n";
    src += "        uint amount" + tag + " = msg.value;\n";
    src += "        require(amount" + tag + " > " + num(rng, 100, 900) + ", \"too small\");\n";
    src += "        " + investors + ".push(msg.sender);\n";
    src += "        " + deposits + ".push(amount" + tag + ");\n";
    src += "        " + pool + " += amount" + tag + " - amount" + tag + " / " + fee + ";\n";
    src += "        uint " + payout + " = " + deposits + "[" + cursor + "] * " + multiplier +
           " / 10;\n";
    src += "        if (" + pool + " >= " + payout + ") {\n";
    src += "            " + pool + " -= " + payout + ";\n";
    src += "            " + cursor + " += 1;\n";
    src += "        }\n";
    src += "        return true;\n";
    src += "    }\n";
    src += "    function " + owed + "(uint slot" + tag + ") public view returns (uint) {\n";
    src += "        return " + deposits + "[slot" + tag + "] * " + multiplier + " / 10;\n";
    src += "    }\n";
    src += "}\n";
    return src;
}

std::string ponzi_waterfall(Rng& rng, int index) {
    std::string tag = salt(rng);
    std::string name = std::string(pick(rng, kPonziNames)) + std::to_string(index);
    std::string investors = pick(rng, kInvestorWords) + tag;
    std::string pool = pick(rng, kPoolWords) + tag;
    std::string payout = pick(rng, kPayoutWords) + tag;
    std::string owed_to = "owedTo" + tag;
    std::string tiers = "tierCount" + tag;
    std::string enter = "enter" + tag;
    std::string pending = "pending" + tag;
    std::string cut = num(rng, 2, 9);

    std::string src;
    src += "contract " + name + " {\n";
    src += "    address[] " + investors + ";\n";
    src += "    mapping(address => uint) " + owed_to + ";\n";
    src += "    uint " + pool + ";\n";
    src += "    uint " + tiers + " = " + num(rng, 3, 7) + ";\n";
    src += filler_vars(rng, tag);
    src += "    function " + enter + "() public payable returns (bool) {\n";
    src += "        uint amount" + tag + " = msg.value;\n";
    src += "        " + pool + " += amount" + tag + ";\n";
    src += "        " + investors + ".push(msg.sender);\n";
    src += "        uint share" + tag + " = amount" + tag + " / " + cut + ";\n";
    src += "        for (uint tier" + tag + " = 0; tier" + tag + " < " + tiers + "; tier" + tag +
           " += 1) {\n";
    src += "            uint " + payout + " = share" + tag + " / (tier" + tag + " + 1);\n";
    src += "            " + pool + " -= " + payout + ";\n";
    src += "            " + owed_to + "[msg.sender] += " + payout + ";\n";
    src += "        }\n";
    src += "        return true;\n";
    src += "    }\n";
    src += "    function " + pending + "() public view returns (uint) {\n";
    src += "        return " + owed_to + "[msg.sender];\n";
    src += "    }\n";
    src += "}\n";
    return src;
}

// -- benign templates ----------------------------------------------------------

const std::array<const char*, 6> kBenignNames = {"SimpleToken", "Escrow",    "VaultLedger",
                                                 "Registry",    "Crowdsale", "TimeLock"};
const std::array<const char*, 4> kBalanceWords = {"balances", "ledger", "accounts", "holdings"};
const std::array<const char*, 4> kSupplyWords = {"supply", "totalMinted", "capacity", "issued"};
const std::array<const char*, 4> kAmountWords = {"amount", "quantity", "units", "sum"};

std::string benign_token(Rng& rng, int index) {
    std::string tag = salt(rng);
    std::string name = std::string(pick(rng, kBenignNames)) + std::to_string(index);
    std::string balances = pick(rng, kBalanceWords) + tag;
    std::string supply = pick(rng, kSupplyWords) + tag;
    std::string amount = pick(rng, kAmountWords) + tag;
    std::string transfer = "transfer" + tag;
    std::string balance_of = "balanceOf" + tag;
    std::string total_supply = "totalSupply" + tag;

    std::string src;
    src += "contract " + name + " {\n";
    src += "    mapping(address => uint) " + balances + ";\n";
    src += "    uint " + supply + " = " + num(rng, 1000, 9000) + ";\n";
    src += filler_vars(rng, tag);
    src += "    event Moved(address src, address dst);\n";
    src += "    function " + transfer + "(address to" + tag + ", uint " + amount +
           ") public returns (bool) {\n";
    src += "        require(" + balances + "[msg.sender] >= " + amount + ", \"insufficient\");\n";
    src += "        " + balances + "[msg.sender] -= " + amount + ";\n";
    src += "        " + balances + "[to" + tag + "] += " + amount + ";\n";
    src += "        return true;\n";
    src += "    }\n";
    src += "    function " + balance_of + "(address owner" + tag + ") public view returns (uint) {\n";
    src += "        return " + balances + "[owner" + tag + "];\n";
    src += "    }\n";
    src += "    function " + total_supply + "() public view returns (uint) {\n";
    src += "        return " + supply + ";\n";
    src += "    }\n";
    src += "}\n";
    return src;
}

std::string benign_vault(Rng& rng, int index) {
    std::string tag = salt(rng);
    std::string name = std::string(pick(rng, kBenignNames)) + std::to_string(index);
    std::string balances = pick(rng, kBalanceWords) + tag;
    std::string amount = pick(rng, kAmountWords) + tag;
    std::string unlock_at = "unlockAt" + tag;
    std::string lock_period = "lockPeriod" + tag;
    std::string lock = "lock" + tag;
    std::string release = "release" + tag;

    std::string src;
    src += "contract " + name + " {\n";
    src += "    mapping(address => uint) " + balances + ";\n";
    src += "    mapping(address => uint) " + unlock_at + ";\n";
    src += "    uint " + lock_period + " = " + num(rng, 100, 999) + ";\n";
    src += filler_vars(rng, tag);
    src += "    function " + lock + "() public payable returns (bool) {\n";
    src += "        uint " + amount + " = msg.value;\n";
    src += "        " + balances + "[msg.sender] += " + amount + ";\n";
    src += "        " + unlock_at + "[msg.sender] = block.timestamp + " + lock_period + ";\n";
    src += "        return true;\n";
    src += "    }\n";
    src += "    function " + release + "() public returns (bool) {\n";
    src += "        require(block.timestamp >= " + unlock_at + "[msg.sender], \"locked\");\n";
    src += "        uint held" + tag + " = " + balances + "[msg.sender];\n";
    src += "        " + balances + "[msg.sender] = 0;\n";
    src += "        payable(msg.sender).transfer(held" + tag + ");\n";
    src += "        return true;\n";
    src += "    }\n";
    src += "}\n";
    return src;
}

std::string benign_registry(Rng& rng, int index) {
    std::string tag = salt(rng);
    std::string name = std::string(pick(rng, kBenignNames)) + std::to_string(index);
    std::string entries = "entries" + tag;
    std::string entry_count = "entryCount" + tag;
    std::string max_entries = "maxEntries" + tag;
    std::string do_register = "register" + tag;
    std::string lookup = "lookup" + tag;

    std::string src;
    src += "contract " + name + " {\n";
    src += "    mapping(uint => address) " + entries + ";\n";
    src += "    uint " + entry_count + ";\n";
    src += "    uint " + max_entries + " = " + num(rng, 8, 64) + ";\n";
    src += filler_vars(rng, tag);
    src += "    function " + do_register + "(uint key" + tag + ") public returns (bool) {\n";
    src += "        require(" + entry_count + " < " + max_entries + ", \"full\");\n";
    src += "        " + entries + "[key" + tag + "] = msg.sender;\n";
    src += "        " + entry_count + " += 1;\n";
    src += "        return true;\n";
    src += "    }\n";
    src += "    function " + lookup + "(uint key" + tag + ") public view returns (address) {\n";
    src += "        return " + entries + "[key" + tag + "];\n";
    src += "    }\n";
    src += "}\n";
    return src;
}

}  // namespace

std::string make_ponzi_contract(std::uint64_t seed, int index) {
    Rng rng(mix_seed(seed, 0xA000 + static_cast<std::uint64_t>(index)));
    return rng.next_index(2) == 0 ? ponzi_chain(rng, index) : ponzi_waterfall(rng, index);
}

std::string make_benign_contract(std::uint64_t seed, int index) {
    Rng rng(mix_seed(seed, 0xB000 + static_cast<std::uint64_t>(index)));
    switch (rng.next_index(3)) {
        case 0: return benign_token(rng, index);
        case 1: return benign_vault(rng, index);
        default: return benign_registry(rng, index);
    }
}

std::vector<DatasetRecord> make_synthetic_dataset(int count, std::uint64_t seed) {
    std::vector<DatasetRecord> records;
    for (int i = 0; i < count; ++i) {
        DatasetRecord rec;
        char id[16];
        std::snprintf(id, sizeof(id), "c%04d", i);
        rec.idx = id;
        if (i % 2 == 0) {
            rec.source = make_ponzi_contract(seed, i);
            rec.label = 1;
        } else {
            rec.source = make_benign_contract(seed, i);
            rec.label = 0;
        }
        records.push_back(std::move(rec));
    }
    return records;
}

std::vector<std::string> make_two_cluster_corpus(int count, std::uint64_t seed) {
    std::vector<std::string> corpus;
    for (int i = 0; i < count; ++i) {
        corpus.push_back(i % 2 == 0 ? make_ponzi_contract(seed, i)
                                    : make_benign_contract(seed, i));
    }
    return corpus;
}

}  // namespace ponzi
