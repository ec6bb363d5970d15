#pragma once

#include <gtest/gtest.h>

#include "toricwall/exact.hpp"

#define EXPECT_TW_ERROR(stmt, expected_kind)                                   \
  do {                                                                         \
    try {                                                                      \
      stmt;                                                                    \
      ADD_FAILURE() << "expected " << expected_kind << " from " #stmt;         \
    } catch (const tw::Error& e) {                                             \
      EXPECT_EQ(e.kind(), expected_kind) << e.what();                          \
    }                                                                          \
  } while (0)
