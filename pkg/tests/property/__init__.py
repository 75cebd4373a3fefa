# Property and oracle tests
