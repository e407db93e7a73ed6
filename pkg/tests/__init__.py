"""Test suite for D2PC"""
