"""Helpers for driving the kernel server in tests"""
