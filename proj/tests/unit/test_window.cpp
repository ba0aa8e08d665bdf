#include <gtest/gtest.h>

#include "ngmres/random.hpp"
#include "ngmres/window.hpp"

using namespace ngmres;

namespace
{

struct Feed
{
  Random rng{99};
  Vector next() { return rng.uniform_vector(6, -1, 1); }
};

}  // namespace

TEST(WindowState, CapacityOneKeepsHeadAndOnePredecessor)
{
  Feed feed;
  WindowState w(WindowSize::of(1));
  const Vector r0 = feed.next();
  const Vector r1 = feed.next();
  w.advance(r0, feed.next(), feed.next());
  w.advance(r1, feed.next(), feed.next());
  EXPECT_EQ(w.stored(), 2);
  EXPECT_EQ(w.residual(0), r1);
  EXPECT_EQ(w.residual(1), r0);
  w.advance(feed.next(), feed.next(), feed.next());
  EXPECT_EQ(w.stored(), 2);
  EXPECT_EQ(w.residual(1), r1);
}

TEST(WindowState, CapacityZeroHoldsOnlyHead)
{
  Feed feed;
  WindowState w(WindowSize::of(0));
  for (int i = 0; i < 4; ++i)
  {
    w.advance(feed.next(), feed.next(), feed.next());
  }
  EXPECT_EQ(w.stored(), 1);
  EXPECT_EQ(w.assemble().cols(), 1);
}

TEST(WindowState, AssemblyMatchesDirectConstructionExactly)
{
  Feed feed;
  for (WindowSize cap : {WindowSize::of(0), WindowSize::of(2), WindowSize::of(5), WindowSize::full()})
  {
    WindowState w(cap);
    std::vector<Vector> history;
    for (int step = 0; step < 12; ++step)
    {
      const Vector r = feed.next();
      const Vector mr = feed.next();
      history.insert(history.begin(), r);
      w = window_advance(std::move(w), r, feed.next(), mr);

      const std::size_t keep = static_cast<std::size_t>(w.stored());
      const std::vector<Vector> newest(history.begin(), history.begin() + static_cast<long>(keep));
      const DenseMatrix direct = assemble_window_direct(newest, mr);
      const DenseMatrix incremental = w.assemble();
      ASSERT_EQ(incremental.rows(), direct.rows());
      ASSERT_EQ(incremental.cols(), direct.cols());
      EXPECT_TRUE((incremental.array() == direct.array()).all()) << cap.to_string();
    }
  }
}

TEST(WindowState, MemoryBoundedByCapacity)
{
  Feed feed;
  WindowState w(WindowSize::of(10));
  for (int step = 0; step < 50; ++step)
  {
    w.advance(feed.next(), feed.next(), feed.next());
    ASSERT_LE(w.stored(), 11);
  }
  EXPECT_EQ(w.stored(), 11);
  EXPECT_EQ(w.depth(), 10);
}

TEST(WindowSize, ParseAndPrint)
{
  EXPECT_EQ(WindowSize::parse("full"), WindowSize::full());
  EXPECT_EQ(WindowSize::parse("3"), WindowSize::of(3));
  EXPECT_EQ(WindowSize::of(3).to_string(), "3");
  EXPECT_EQ(WindowSize::of(4).depth_at(2), 2);
  EXPECT_EQ(WindowSize::full().depth_at(7), 7);
  EXPECT_THROW(WindowSize::parse("-1"), std::invalid_argument);
  EXPECT_THROW(WindowSize::parse("abc"), std::invalid_argument);
}
