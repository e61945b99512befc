"""Tests for the subexponential proof-search kernel"""
