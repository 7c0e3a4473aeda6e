#pragma once

#include <gtest/gtest.h>

#include "wzns/error.hpp"

#define EXPECT_WZNS_ERROR(stmt, expected)                                  \
    do {                                                                   \
        try {                                                              \
            stmt;                                                          \
            ADD_FAILURE() << "no exception from " #stmt;                   \
        } catch (const wzns::Error& e) {                                   \
            EXPECT_EQ(e.code(), expected) << e.what();                     \
        }                                                                  \
    } while (0)
