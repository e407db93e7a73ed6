"""Tests for the QP solver and condensing"""
