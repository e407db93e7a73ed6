"""D2PC experiment backend"""
