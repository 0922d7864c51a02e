#include <jetad/multi_index.hpp>

#include <gtest/gtest.h>

using jetad::MultiIndex;

TEST(MultiIndex, DigitsRoundTrip)
{
    MultiIndex a{1, 0, 2};
    EXPECT_EQ(a.digits(), "102");
    EXPECT_EQ(MultiIndex::from_digits("102"), a);
    EXPECT_EQ(a.degree(), 3U);
    EXPECT_EQ(a.factorial(), 2U);
    EXPECT_THROW(MultiIndex::from_digits("1x"), std::invalid_argument);
    EXPECT_THROW((MultiIndex{10}.digits()), std::out_of_range);
}

TEST(MultiIndex, LexicographicEnumeration)
{
    auto all = jetad::multi_indices_up_to(2, 2);
    std::vector<std::string> digits;
    for (const auto& m : all) digits.push_back(m.digits());
    EXPECT_EQ(digits, (std::vector<std::string>{"00", "01", "02", "10", "11", "20"}));
    EXPECT_TRUE(std::is_sorted(all.begin(), all.end()));
}

TEST(MultiIndex, CountMatchesBinomial)
{
    for (unsigned k = 1; k <= 5; ++k)
        for (unsigned r = 0; r <= 5; ++r)
            EXPECT_EQ(jetad::multi_indices_up_to(k, r).size(), jetad::binomial(r + k, k)) << k << "," << r;
}

TEST(MultiIndex, BoundedBy)
{
    EXPECT_TRUE((MultiIndex{1, 0}.bounded_by(MultiIndex{1, 1})));
    EXPECT_FALSE((MultiIndex{2, 0}.bounded_by(MultiIndex{1, 1})));
    EXPECT_FALSE((MultiIndex{1}.bounded_by(MultiIndex{1, 1})));
    EXPECT_EQ(MultiIndex::unit(3, 1, 2), (MultiIndex{0, 2, 0}));
}
