#include "schottky/words.hpp"

#include "schottky/error.hpp"

#include <cstdlib>

namespace schottky {

GroupWord::GroupWord(std::vector<int> letters) : letters_(std::move(letters))
{
    for (std::size_t k = 0; k < letters_.size(); ++k) {
        if (letters_[k] == 0)
            fail(ErrorKind::InvalidInput, "zero letter in word");
        if (k > 0 && letters_[k] == -letters_[k - 1])
            fail(ErrorKind::NotReduced, "adjacent letters cancel in " + to_string());
    }
}

GroupWord GroupWord::inverse() const
{
    std::vector<int> inv(letters_.rbegin(), letters_.rend());
    for (int& l : inv)
        l = -l;
    return GroupWord(std::move(inv));
}

std::string GroupWord::to_string() const
{
    std::string s = "(";
    for (std::size_t k = 0; k < letters_.size(); ++k) {
        if (k)
            s += ',';
        s += std::to_string(letters_[k]);
    }
    return s + ')';
}

int letter_rank(int letter) noexcept { return 2 * (std::abs(letter) - 1) + (letter < 0 ? 1 : 0); }

int letter_from_rank(int rank) noexcept { return (rank % 2 == 0) ? rank / 2 + 1 : -(rank / 2 + 1); }

namespace {

bool extend(int rank, int remaining, std::vector<int>& buf, const std::function<bool(const GroupWord&)>& visit)
{
    if (remaining == 0)
        return visit(GroupWord(buf));
    for (int r = 0; r < 2 * rank; ++r) {
        const int l = letter_from_rank(r);
        if (!buf.empty() && l == -buf.back())
            continue;
        buf.push_back(l);
        const bool go = extend(rank, remaining - 1, buf, visit);
        buf.pop_back();
        if (!go)
            return false;
    }
    return true;
}

} // namespace

void for_each_reduced_word(int rank, int max_len, const std::function<bool(const GroupWord&)>& visit)
{
    if (rank < 1 || max_len < 0)
        fail(ErrorKind::InvalidInput, "rank must be >= 1 and max_len >= 0");
    std::vector<int> buf;
    for (int len = 0; len <= max_len; ++len)
        if (!extend(rank, len, buf, visit))
            return;
}

std::vector<GroupWord> enumerate_reduced_words(int rank, int max_len)
{
    std::vector<GroupWord> out;
    for_each_reduced_word(rank, max_len, [&](const GroupWord& w) {
        out.push_back(w);
        return true;
    });
    return out;
}

std::vector<GroupWord> coset_representatives(int rank, int i, int max_len)
{
    if (i < 1 || i > rank)
        fail(ErrorKind::IndexOutOfRange, "generator index " + std::to_string(i));
    std::vector<GroupWord> out;
    for_each_reduced_word(rank, max_len, [&](const GroupWord& w) {
        if (w.empty() || std::abs(w.back()) != i)
            out.push_back(w);
        return true;
    });
    return out;
}

std::vector<GroupWord> double_coset_representatives(int rank, int i, int j, int max_len)
{
    if (i < 1 || i > rank || j < 1 || j > rank)
        fail(ErrorKind::IndexOutOfRange, "generator index out of range");
    std::vector<GroupWord> out;
    for_each_reduced_word(rank, max_len, [&](const GroupWord& w) {
        if (w.empty() || (std::abs(w.front()) != i && std::abs(w.back()) != j))
            out.push_back(w);
        return true;
    });
    return out;
}

} // namespace schottky
